//! Hypergraph Lagrangians, colex and lex families, and sums of degrees squared.
//!
//! The crate is organised around [`RGraph`], an `r`-uniform hypergraph on `[t]`:
//!
//! * [`hypergraph`]: orders, compressions, links, twins, canonical forms and the edge-list format;
//! * [`lagrangian`]: evaluation and multistart maximization of `w(G)` over the simplex, with
//!   first-order certificates;
//! * [`degrees`]: sums of degrees squared and their bounded and unbounded maxima;
//! * [`asymptotics`]: closed-form expansions and bounds checked against the solver;
//! * [`search`]: exhaustive desk-scale comparison of colex against every left-compressed family;
//! * [`report`]: the versioned JSON report format.

pub mod asymptotics;
pub mod degrees;
pub mod error;
pub mod hypergraph;
pub mod lagrangian;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use hypergraph::RGraph;
pub use lagrangian::{LagrangianCertificate, SolverConfig, Weighting};
