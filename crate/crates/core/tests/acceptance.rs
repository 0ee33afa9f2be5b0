//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). Failures are reported but only turn into a
//! non-zero exit status when `LAGLAB_ACCEPTANCE_STRICT=1`, so known red criteria stay visible
//! without hiding the rest of the suite.

use laglab_core::asymptotics::{check_nikiforov, expansion_check};
use laglab_core::degrees::{
    p2, p2_max_bounded, p2_pair_identity, p2_star_value, star, structure_of, verify_ak_counterexample, Structure,
};
use laglab_core::hypergraph::{all_r_subsets, binomial, canonical_form, clique, colex_segment, is_left_compressed};
use laglab_core::lagrangian::{
    ascend_detailed, gradient, growth_step, kkt_residuals, maximize_lagrangian, motzkin_straus_exact, start_weighting,
    weight_of, weight_sum,
};
use laglab_core::report::to_json;
use laglab_core::search::{enumerate_left_compressed, ff_verify, SearchOptions, SearchReport};
use laglab_core::{RGraph, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

struct Gate {
    failures: usize,
}

impl Gate {
    fn check(&mut self, id: &str, name: &str, budget: Duration, f: impl FnOnce() -> (bool, String)) {
        let start = Instant::now();
        let (ok, detail) = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = ok && in_time;
        if !pass {
            self.failures += 1;
        }
        let time_note = if in_time { String::new() } else { format!(" [over budget {budget:?}]") };
        println!(
            "criterion {id:<3} {} {name}: {detail} ({:.2}s){time_note}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
}

fn random_graph(rng: &mut ChaCha8Rng, r: usize, t: usize, density: f64) -> RGraph {
    let edges: Vec<u64> = all_r_subsets(t, r).filter(|_| rng.gen::<f64>() < density).collect();
    RGraph::from_masks(r, t, edges).unwrap()
}

fn criterion5(opts: &SearchOptions) -> (Vec<SearchReport>, Vec<SearchReport>) {
    let r3 = (1..=20).map(|m| ff_verify(3, m, 6, opts).unwrap()).collect();
    let r2 = (1..=10).map(|m| ff_verify(2, m, 5, opts).unwrap()).collect();
    (r3, r2)
}

fn main() {
    let mut gate = Gate { failures: 0 };
    let cfg = SolverConfig::default();

    gate.check("1", "clique formula", Duration::from_secs(10), || {
        let mut worst: f64 = 0.0;
        for r in 2..=4 {
            for t in r..=10 {
                let want = binomial(t as u64, r as u64) as f64 / (t as f64).powi(r as i32);
                let got = maximize_lagrangian(&clique(t, r).unwrap(), &cfg).value;
                worst = worst.max((got - want).abs());
            }
        }
        (worst <= 1e-9, format!("max |lambda - C(t,r)/t^r| = {worst:.3e} over r in 2..=4, t in r..=10"))
    });

    gate.check("2", "P2 counterexample vs lex family, t in 6..=12", Duration::from_secs(30), || {
        let rep = verify_ak_counterexample(6, 12).unwrap();
        let ok = rep.counterexample == 211 && rep.family_max == 209;
        (
            ok,
            format!(
                "P2(H) = {}, family max = {} at {} (claimed 209)",
                rep.counterexample, rep.family_max, rep.family_argmax
            ),
        )
    });

    gate.check("2b", "P2 counterexample vs lex family, t = 7", Duration::from_secs(30), || {
        let rep = verify_ak_counterexample(7, 7).unwrap();
        let ok = rep.counterexample == 211 && rep.family_max == 209;
        (ok, format!("P2(H) = {}, family max = {} at {}", rep.counterexample, rep.family_max, rep.family_argmax))
    });

    gate.check("3", "star formula and pair identity", Duration::from_secs(30), || {
        let mut ok = true;
        for r in 2..=5 {
            for m in 1..=30 {
                ok &= p2(&star(r, m).unwrap()) == ((r - 1) * m * m + m) as u64;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut agree = 0;
        for _ in 0..200 {
            let r = rng.gen_range(2..=4);
            let t = rng.gen_range(r..=9);
            let density = rng.gen::<f64>();
            let g = random_graph(&mut rng, r, t, density);
            if p2(&g) == p2_pair_identity(&g) {
                agree += 1;
            }
        }
        (ok && agree == 200, format!("stars r<=5, m<=30 exact: {ok}; pair identity on {agree}/200 random graphs"))
    });

    gate.check("4", "P2 maximizers for r=3, m<=6", Duration::from_secs(120), || {
        let mut ok = true;
        let mut notes = Vec::new();
        for m in 1..=6 {
            // an m-edge 3-graph has at most 3m non-isolated vertices
            let rep = p2_max_bounded(3, m, 3 * m, u128::MAX).unwrap();
            let shapes_ok = rep.maximizers.iter().all(|g| !structure_of(g).contains(&Structure::Other));
            ok &= shapes_ok && rep.value == p2_star_value(3, m);
            notes.push(format!("m={m}:{}x{}", rep.value, rep.maximizers.len()));
        }
        (ok, format!("all maximizers are stars or in K4, value 2m^2+m ({})", notes.join(" ")))
    });

    let c5_start = Instant::now();
    let opts = SearchOptions { table: true, ..Default::default() };
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let (r3, r2) = pool.install(|| criterion5(&opts));
    let c5_elapsed = c5_start.elapsed();

    gate.check("5", "colex maximizes lambda (r=3 t=6 m<=20; r=2 t=5 m<=10)", Duration::from_secs(600), || {
        let r3_ok = r3.iter().all(|rep| rep.colex_value >= rep.best_value - 1e-7 && rep.unconverged.is_empty());
        let candidates: usize = r3.iter().map(|rep| rep.candidates).sum();
        let mut ms_err: f64 = 0.0;
        for rep in &r2 {
            let exact_best =
                rep.table.as_ref().unwrap().iter().filter_map(|row| row.exact).fold(f64::NEG_INFINITY, f64::max);
            let exact_colex = motzkin_straus_exact(&colex_segment(rep.m, 2).unwrap()).unwrap();
            ms_err = ms_err.max((rep.best_value - exact_best).abs()).max((rep.colex_value - exact_colex).abs());
            ms_err = ms_err.max(rep.exact_max_error.unwrap());
        }
        let r2_ok = r2.iter().all(|rep| rep.colex_is_max) && ms_err <= 1e-7;
        let worst_margin = r3.iter().chain(&r2).map(|rep| rep.margin).fold(f64::NEG_INFINITY, f64::max);
        (
            r3_ok && r2_ok && c5_elapsed <= Duration::from_secs(600),
            format!(
                "{candidates} left-compressed 3-graphs, worst best-colex margin {worst_margin:.3e}, \
                 Motzkin-Straus max error {ms_err:.3e}, search took {:.2}s",
                c5_elapsed.as_secs_f64()
            ),
        )
    });

    gate.check("6", "real-binomial bound on every r=3 certificate", Duration::from_secs(60), || {
        let mut ok = true;
        let mut worst: f64 = f64::NEG_INFINITY;
        let mut equal_at = Vec::new();
        for rep in &r3 {
            let m = rep.m as u64;
            for row in rep.table.as_ref().unwrap() {
                let v = check_nikiforov(row.lambda, m, 3, 1e-8);
                ok &= v.holds;
                worst = worst.max(v.value - v.bound);
            }
            let best = check_nikiforov(rep.best_value, m, 3, 1e-8);
            if best.equality {
                equal_at.push(rep.m);
            }
        }
        ok &= equal_at == [1, 4, 10, 20];
        (ok, format!("max lambda - m x^-3 = {worst:.3e}; equality at m = {equal_at:?}"))
    });

    gate.check("7", "four-term expansion, r=3", Duration::from_secs(300), || {
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for t in [20, 30, 40] {
            for a in 1..=4 {
                let c = expansion_check(t, 3, a, &cfg).unwrap();
                ok &= c.converged && c.ratio <= 50.0;
                worst = worst.max(c.ratio);
            }
        }
        (ok, format!("max |lambda - expansion| / (a^3 t^-5) = {worst:.3} (fixture 50)"))
    });

    gate.check("8", "solver properties", Duration::from_secs(120), || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut worst_drop: f64 = 0.0;
        let mut worst_kkt: f64 = 0.0;
        let mut worst_fd: f64 = 0.0;
        let mut certificates = 0;
        for i in 0..100 {
            let r = rng.gen_range(2..=4);
            let t = rng.gen_range(r + 1..=9);
            let density = 0.2 + 0.7 * rng.gen::<f64>();
            let g = random_graph(&mut rng, r, t, density);
            let mut w = start_weighting(t, 8, i + 1);
            let mut last = weight_of(&g, &w).unwrap();
            for _ in 0..200 {
                w = growth_step(&g, &w).unwrap();
                let v = weight_of(&g, &w).unwrap();
                worst_drop = worst_drop.max(last - v);
                last = v;
            }

            let cert = maximize_lagrangian(&g, &cfg);
            if cert.converged {
                certificates += 1;
                let k = kkt_residuals(&g, &cert.witness).unwrap();
                worst_kkt = worst_kkt.max(k.max_vertex).max(k.max_pair);
            }

            let p = ascend_detailed(&g, &start_weighting(t, 9, i + 1), &SolverConfig { max_iters: 5, ..cfg.clone() })
                .unwrap()
                .weighting;
            let grad = gradient(&g, &p).unwrap();
            let h = 1e-6;
            for x in 0..t {
                let mut up = p.as_slice().to_vec();
                let mut down = up.clone();
                up[x] += h;
                down[x] -= h;
                let fd = (weight_sum(&g, &up) - weight_sum(&g, &down)) / (2.0 * h);
                worst_fd = worst_fd.max((fd - grad[x]).abs() / grad[x].abs().max(1e-6));
            }
        }
        let ok = worst_drop <= 1e-14 && certificates > 0 && worst_kkt <= 1e-8 && worst_fd <= 1e-6;
        (
            ok,
            format!(
                "max ascent drop {worst_drop:.3e}; KKT max residual {worst_kkt:.3e} over {certificates} converged \
                 certificates; gradient vs finite differences {worst_fd:.3e} relative"
            ),
        )
    });

    gate.check("9", "left-compressed enumeration vs brute force", Duration::from_secs(120), || {
        let mut ok = true;
        let mut families = 0;
        for t in 3..=6 {
            let all: Vec<u64> = all_r_subsets(t, 3).collect();
            for m in 0..=6.min(all.len()) {
                let mut listed = BTreeSet::new();
                let mut count = 0;
                for g in enumerate_left_compressed(3, m, t).unwrap() {
                    ok &= g.len() == m && is_left_compressed(&g);
                    listed.insert(canonical_form(&g).unwrap());
                    count += 1;
                }
                let mut filtered = BTreeSet::new();
                let mut filtered_count = 0;
                for bits in 0u64..1 << all.len() {
                    if bits.count_ones() as usize != m {
                        continue;
                    }
                    let g = RGraph::from_masks(3, t, (0..all.len()).filter(|i| bits >> i & 1 == 1).map(|i| all[i]))
                        .unwrap();
                    if is_left_compressed(&g) {
                        filtered.insert(canonical_form(&g).unwrap());
                        filtered_count += 1;
                    }
                }
                ok &= listed == filtered && count == filtered_count;
                families += count;
            }
        }
        (ok, format!("{families} families for r=3, m<=6, t<=6 match the filtered enumeration"))
    });

    gate.check("10", "thread-count independence of the search report", Duration::from_secs(600), || {
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let (s3, s2) = single.install(|| criterion5(&opts));
        let a = to_json("ff_verify", &(&r3, &r2));
        let b = to_json("ff_verify", &(&s3, &s2));
        (a == b, format!("1 vs {threads} threads: {} bytes, identical = {}", a.len(), a == b))
    });

    println!("acceptance: {} failing criteria", gate.failures);
    if gate.failures > 0 && std::env::var("LAGLAB_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
