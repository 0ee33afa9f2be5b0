//! Multistart growth-transform ascent for `p(w) = w(G)` on the simplex.
//!
//! One step maps `w(x) -> w(x) * dp/dw(x) / (r * p(w))`. Since `p` is homogeneous of degree
//! `r` with nonnegative coefficients, the image stays on the simplex and `p` never decreases.

use super::weighting::Weighting;
use crate::error::{Error, Result};
use crate::hypergraph::{vertices_of, RGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Weights below this are set to zero and stay there.
pub const ZERO_CLAMP: f64 = 1e-15;

/// Mixing fraction toward uniform when an iterate has `p(w) = 0` on a nonempty graph.
const ZERO_VALUE_MIX: f64 = 1e-3;

/// Largest `t` for which the support scan runs.
pub const SUPPORT_SCAN_MAX_VERTICES: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Random starts in addition to the uniform one.
    pub starts: usize,
    pub max_iters: usize,
    /// Convergence threshold on the largest stationarity residual.
    pub tol: f64,
    pub seed: u64,
    /// Also ascend from the uniform weighting on every support (only for `t <= 6`).
    pub support_scan: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { starts: 64, max_iters: 100_000, tol: 1e-10, seed: 0, support_scan: false }
    }
}

/// Edges flattened to zero-based vertex indices.
struct FlatEdges {
    r: usize,
    flat: Vec<usize>,
}

impl FlatEdges {
    fn new(g: &RGraph) -> Self {
        let flat = g.edges().iter().flat_map(|&e| vertices_of(e).map(|v| v - 1)).collect();
        FlatEdges { r: g.r(), flat }
    }

    fn value(&self, w: &[f64]) -> f64 {
        self.flat.chunks_exact(self.r).map(|e| e.iter().map(|&v| w[v]).product::<f64>()).sum()
    }

    /// Fills `grad` with `dp/dw(x) = w(N(x))` and returns `p(w)`.
    fn gradient(&self, w: &[f64], grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let r = self.r;
        let mut prefix = vec![1.0; r + 1];
        let mut total = 0.0;
        for e in self.flat.chunks_exact(r) {
            for i in 0..r {
                prefix[i + 1] = prefix[i] * w[e[i]];
            }
            total += prefix[r];
            let mut suffix = 1.0;
            for i in (0..r).rev() {
                grad[e[i]] += prefix[i] * suffix;
                suffix *= w[e[i]];
            }
        }
        total
    }
}

fn check_dims(g: &RGraph, w: &Weighting) -> Result<()> {
    if w.len() != g.t() {
        return Err(Error::DimensionMismatch { got: w.len(), expected: g.t() });
    }
    Ok(())
}

/// `w(G) = sum over edges of the product of vertex weights`.
pub fn weight_of(g: &RGraph, w: &Weighting) -> Result<f64> {
    check_dims(g, w)?;
    Ok(FlatEdges::new(g).value(w.as_slice()))
}

/// `w(G)` over any commutative semiring of weights, e.g. exact rationals.
pub fn weight_sum<T>(g: &RGraph, w: &[T]) -> T
where
    T: Clone + num_traits::Zero + num_traits::One,
{
    g.edges().iter().fold(T::zero(), |acc, &e| acc + vertices_of(e).fold(T::one(), |p, v| p * w[v - 1].clone()))
}

/// `w(N_G(S))`, the weight of the link of `S`.
pub fn link_weight(g: &RGraph, w: &Weighting, s: &[usize]) -> Result<f64> {
    check_dims(g, w)?;
    let link = g.link(s)?;
    Ok(link.into_iter().map(|f| vertices_of(f).map(|v| w.get(v)).product::<f64>()).sum())
}

/// All partial derivatives `dp/dw(x) = w(N(x))`, indexed from zero.
pub fn gradient(g: &RGraph, w: &Weighting) -> Result<Vec<f64>> {
    check_dims(g, w)?;
    let mut grad = vec![0.0; g.t()];
    FlatEdges::new(g).gradient(w.as_slice(), &mut grad);
    Ok(grad)
}

#[derive(Clone, Debug)]
pub struct AscentOutcome {
    pub weighting: Weighting,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Largest `|w(N(x)) - r w(G)|` over vertices of positive weight.
    pub residual: f64,
}

fn residual(w: &[f64], grad: &[f64], rp: f64) -> f64 {
    w.iter().zip(grad).filter(|(wx, _)| **wx > 0.0).map(|(_, g)| (g - rp).abs()).fold(0.0, f64::max)
}

/// Multiplicative update in place; returns false if nothing could be done (`p = 0`).
fn apply_growth(w: &mut [f64], grad: &[f64], p: f64, r: usize) -> bool {
    if p <= 0.0 {
        return false;
    }
    let rp = r as f64 * p;
    let mut total = 0.0;
    for (wx, g) in w.iter_mut().zip(grad) {
        *wx *= g / rp;
        if *wx < ZERO_CLAMP {
            *wx = 0.0;
        }
        total += *wx;
    }
    w.iter_mut().for_each(|wx| *wx /= total);
    true
}

fn mix_toward_uniform(w: &mut [f64]) {
    let u = 1.0 / w.len() as f64;
    w.iter_mut().for_each(|wx| *wx = (1.0 - ZERO_VALUE_MIX) * *wx + ZERO_VALUE_MIX * u);
}

/// One growth-transform step (with the zero-value fallback).
pub fn growth_step(g: &RGraph, w: &Weighting) -> Result<Weighting> {
    check_dims(g, w)?;
    let edges = FlatEdges::new(g);
    let mut v = w.as_slice().to_vec();
    let mut grad = vec![0.0; g.t()];
    let p = edges.gradient(&v, &mut grad);
    if !apply_growth(&mut v, &grad, p, g.r()) && !g.is_empty() {
        mix_toward_uniform(&mut v);
    }
    Ok(Weighting::from_vec_unchecked(v))
}

fn run_ascent(edges: &FlatEdges, mut w: Vec<f64>, cfg: &SolverConfig) -> Result<AscentOutcome> {
    let r = edges.r as f64;
    let mut grad = vec![0.0; w.len()];
    let mut p = edges.gradient(&w, &mut grad);
    let mut iterations = 0;
    loop {
        let res = residual(&w, &grad, r * p);
        if !(p.is_finite() && res.is_finite()) {
            return Err(Error::NumericalFault(iterations));
        }
        let converged = res <= cfg.tol;
        if converged || iterations >= cfg.max_iters {
            return Ok(AscentOutcome {
                weighting: Weighting::from_vec_unchecked(w),
                value: p,
                iterations,
                converged,
                residual: res,
            });
        }
        if !apply_growth(&mut w, &grad, p, edges.r) {
            mix_toward_uniform(&mut w);
        }
        iterations += 1;
        p = edges.gradient(&w, &mut grad);
    }
}

/// Relative weights below these are dropped when an ascent stalls.
const POLISH_THRESHOLDS: [f64; 2] = [1e-2, 1e-4];

/// Runs growth-transform steps from `w0` until the stationarity residual drops to `cfg.tol`
/// or `cfg.max_iters` steps have been taken.
///
/// At a degenerate maximum a vertex outside the optimal support can have `w(N(x)) = r w(G)`,
/// and its weight then only decays like `1/k`. When the budget runs out, small weights are
/// zeroed and the ascent is restarted on the remaining face; the result is kept if it converges
/// without losing value.
pub fn ascend_detailed(g: &RGraph, w0: &Weighting, cfg: &SolverConfig) -> Result<AscentOutcome> {
    check_dims(g, w0)?;
    let edges = FlatEdges::new(g);
    let out = run_ascent(&edges, w0.as_slice().to_vec(), cfg)?;
    if out.converged {
        return Ok(out);
    }
    let top = out.weighting.as_slice().iter().copied().fold(0.0, f64::max);
    for theta in POLISH_THRESHOLDS {
        let w: Vec<f64> = out.weighting.as_slice().iter().map(|&x| if x < theta * top { 0.0 } else { x }).collect();
        if w == out.weighting.as_slice() {
            continue;
        }
        let total: f64 = w.iter().sum();
        let polished = run_ascent(&edges, w.into_iter().map(|x| x / total).collect(), cfg)?;
        if polished.converged && polished.value >= out.value - 1e-12 {
            return Ok(AscentOutcome { iterations: out.iterations + polished.iterations, ..polished });
        }
    }
    Ok(out)
}

pub fn ascend(g: &RGraph, w0: &Weighting, cfg: &SolverConfig) -> Result<Weighting> {
    ascend_detailed(g, w0, cfg).map(|o| o.weighting)
}

/// Start `0` is uniform; start `i > 0` is a normalized vector of exponentials drawn from
/// stream `i` of a ChaCha generator seeded with `seed`.
pub fn start_weighting(t: usize, seed: u64, index: usize) -> Weighting {
    if index == 0 {
        return Weighting::uniform(t);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let raw: Vec<f64> = (0..t).map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-12).collect();
    Weighting::normalized(raw).expect("exponential draws are positive")
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportScan {
    pub supports: usize,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub best_value: f64,
    /// The multistart value was within `1e-9` of the best over all supports.
    pub agrees: bool,
}

/// Best weighting found for `G`, with the data needed to check it.
#[derive(Clone, Debug, Serialize)]
pub struct LagrangianCertificate {
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub value: f64,
    pub witness: Weighting,
    /// Vertices in order of decreasing witness weight; relabeling `vertex_order[i]` as `i + 1`
    /// makes the witness decreasing.
    pub vertex_order: Vec<usize>,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub kkt_max_residual: f64,
    pub iterations: usize,
    pub starts_used: usize,
    pub best_start: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support_scan: Option<SupportScan>,
}

impl LagrangianCertificate {
    /// The witness with vertices relabeled so weights are nonincreasing.
    pub fn decreasing_witness(&self) -> Weighting {
        Weighting::from_vec_unchecked(self.vertex_order.iter().map(|&v| self.witness.get(v)).collect())
    }

    /// `G` relabeled by [`Self::vertex_order`], so that the decreasing witness is maximal for it.
    pub fn relabel(&self, g: &RGraph) -> Result<RGraph> {
        let mut sigma = vec![0; self.vertex_order.len()];
        for (i, &v) in self.vertex_order.iter().enumerate() {
            sigma[v - 1] = i + 1;
        }
        g.permute(&sigma)
    }
}

fn pick_best(outcomes: Vec<(usize, AscentOutcome)>) -> Option<(usize, AscentOutcome)> {
    // highest value, then lowest start index
    outcomes.into_iter().fold(None, |best, cur| match best {
        Some(b) if b.1.value >= cur.1.value => Some(b),
        _ => Some(cur),
    })
}

/// Lower bound for `lambda(G)` from `cfg.starts + 1` ascents, reported with its witness.
/// Non-convergence is reported through the `converged` flag.
pub fn maximize_lagrangian(g: &RGraph, cfg: &SolverConfig) -> LagrangianCertificate {
    let t = g.t();
    let outcomes: Vec<(usize, AscentOutcome)> = (0..=cfg.starts)
        .into_par_iter()
        .filter_map(|i| ascend_detailed(g, &start_weighting(t, cfg.seed, i), cfg).ok().map(|o| (i, o)))
        .collect();
    let starts_used = cfg.starts + 1;
    let (mut best_start, mut best) = pick_best(outcomes).unwrap_or_else(|| {
        let w = Weighting::uniform(t);
        let value = weight_of(g, &w).unwrap_or(0.0);
        (0, AscentOutcome { weighting: w, value, iterations: 0, converged: false, residual: f64::INFINITY })
    });

    let mut support_scan = None;
    if cfg.support_scan && t <= SUPPORT_SCAN_MAX_VERTICES {
        let scans: Vec<(usize, AscentOutcome)> = (1u64..1 << t)
            .into_par_iter()
            .filter_map(|s| {
                let support: Vec<usize> = vertices_of(s).collect();
                let w0 = Weighting::uniform_on(t, &support).ok()?;
                ascend_detailed(g, &w0, cfg).ok().map(|o| (starts_used + s as usize - 1, o))
            })
            .collect();
        let supports = scans.len();
        if let Some((idx, scan_best)) = pick_best(scans) {
            let agrees = scan_best.value <= best.value + 1e-9;
            support_scan = Some(SupportScan { supports, best_value: scan_best.value, agrees });
            if scan_best.value > best.value {
                best_start = idx;
                best = scan_best;
            }
        }
    }

    LagrangianCertificate {
        value: best.value,
        vertex_order: best.weighting.decreasing_order(),
        witness: best.weighting,
        kkt_max_residual: best.residual,
        iterations: best.iterations,
        starts_used,
        best_start,
        converged: best.converged,
        support_scan,
    }
}
