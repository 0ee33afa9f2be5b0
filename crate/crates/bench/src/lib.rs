//! Benchmarks only; see `benches/laglab.rs`.
