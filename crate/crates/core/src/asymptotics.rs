//! Closed-form companions to the solver: the small-`a` expansion of `lambda` near a clique,
//! the real-binomial bound `Lambda(m, r) <= m x^(-r)`, the constructive lower-bound weightings,
//! and the explicit inequalities satisfied by maximizers.
//!
//! Statements that only hold up to unknown constants are split into an assertable inequality
//! with the constant removed and a measured diagnostic.

use crate::degrees::p2;
use crate::error::{Error, Result};
use crate::hypergraph::{binomial, colex_segment, is_left_compressed, RGraph};
use crate::lagrangian::{maximize_lagrangian, weight_of, SolverConfig, Weighting};
use num_rational::Ratio;
use serde::Serialize;

/// `mu_i = C(t - i, r - i) / t^(r - i)`.
pub fn mu(i: usize, t: usize, r: usize) -> f64 {
    assert!(i <= r && r <= t, "mu needs i <= r <= t");
    binomial((t - i) as u64, (r - i) as u64) as f64 / (t as f64).powi((r - i) as i32)
}

/// `lambda(K_t^(r)) = C(t, r) / t^r`.
pub fn clique_lagrangian(t: usize, r: usize) -> f64 {
    mu(0, t, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpansionInput {
    pub t: usize,
    pub r: usize,
    /// number of non-edges
    pub a: u64,
    /// `sum_x e(x)^2`, the P2 of the complement
    pub sum_e_sq: u64,
}

impl ExpansionInput {
    pub fn new(t: usize, r: usize, a: u64, sum_e_sq: u64) -> Result<Self> {
        if r < 2 || t < r {
            return Err(Error::InvalidVertexCount { t, r, max: crate::hypergraph::MAX_VERTICES });
        }
        let max_a = binomial(t as u64 - 2, r as u64 - 2);
        if a as u128 > max_a {
            return Err(Error::InvalidArgument(format!("a = {a} exceeds C(t-2, r-2) = {max_a}")));
        }
        if sum_e_sq > r as u64 * a * a {
            return Err(Error::InvalidArgument(format!("sum of e(x)^2 = {sum_e_sq} exceeds r a^2")));
        }
        Ok(ExpansionInput { t, r, a, sum_e_sq })
    }

    /// Reads `a` and `sum e(x)^2` off a subgraph of `[t]^(r)`.
    pub fn from_graph(g: &RGraph) -> Result<Self> {
        let c = g.complement();
        Self::new(g.t(), g.r(), c.len() as u64, p2(&c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expansion {
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub value: f64,
    /// `a^3 t^(4 - 3r)`, the order of the neglected terms.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub error_scale: f64,
}

/// `mu_0 - a/t^r + sum e(x)^2 / (2 mu_2 t^(2(r-1))) - r^2 a^2 / (2 mu_2 t^(2r-1))`.
pub fn eval_lag_expansion(input: &ExpansionInput) -> Expansion {
    let (t, r) = (input.t as f64, input.r as i32);
    let a = input.a as f64;
    let mu2 = mu(2, input.t, input.r);
    let value = mu(0, input.t, input.r) - a / t.powi(r) + input.sum_e_sq as f64 / (2.0 * mu2 * t.powi(2 * (r - 1)))
        - (r * r) as f64 * a * a / (2.0 * mu2 * t.powi(2 * r - 1));
    Expansion { value, error_scale: a.powi(3) * t.powi(4 - 3 * r) }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionCheck {
    pub t: usize,
    pub r: usize,
    pub a: u64,
    pub sum_e_sq: u64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub lambda: f64,
    pub converged: bool,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub expansion: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub error_scale: f64,
    /// `|lambda - expansion| / error_scale`
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub ratio: f64,
}

/// Solves `lambda` for the colex graph with `a` non-edges on `[t]` (a star of non-edges
/// through `{t-1, t}` while `a <= t - 2`) and compares it with the expansion.
pub fn expansion_check(t: usize, r: usize, a: u64, cfg: &SolverConfig) -> Result<ExpansionCheck> {
    let m = binomial(t as u64, r as u64) as usize - a as usize;
    let g = colex_segment(m, r)?.with_vertex_count(t)?;
    let input = ExpansionInput::from_graph(&g)?;
    let exp = eval_lag_expansion(&input);
    let cert = maximize_lagrangian(&g, cfg);
    let ratio = if exp.error_scale > 0.0 { (cert.value - exp.value).abs() / exp.error_scale } else { 0.0 };
    Ok(ExpansionCheck {
        t,
        r,
        a,
        sum_e_sq: input.sum_e_sq,
        lambda: cert.value,
        converged: cert.converged,
        expansion: exp.value,
        error_scale: exp.error_scale,
        ratio,
    })
}

/// The real `x >= r - 1` with `x (x-1) ... (x-r+1) / r! = m`.
pub fn nikiforov_x(m: u64, r: usize) -> f64 {
    let rf = r as f64;
    let target = m as f64;
    let fact: f64 = (1..=r).map(|i| i as f64).product();
    let f = |x: f64| (0..r).map(|i| x - i as f64).product::<f64>() / fact - target;
    let df =
        |x: f64| (0..r).map(|j| (0..r).filter(|&i| i != j).map(|i| x - i as f64).product::<f64>()).sum::<f64>() / fact;
    let (mut lo, mut hi) = (rf - 1.0, rf + target);
    if m == 0 {
        return lo;
    }
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let step = f(x) / df(x);
        let next = (x - step).clamp(lo, hi);
        if (next - x).abs() <= 1e-15 * x {
            x = next;
            break;
        }
        x = next;
    }
    // integer roots are exact
    let n = x.round();
    if (x - n).abs() < 1e-9 && binomial(n as u64, r as u64) == m as u128 {
        return n;
    }
    x
}

/// `m x^(-r)` with `C(x, r) = m`.
pub fn nikiforov_bound(m: u64, r: usize) -> f64 {
    m as f64 * nikiforov_x(m, r).powi(-(r as i32))
}

#[derive(Clone, Debug, Serialize)]
pub struct NikiforovVerdict {
    pub m: u64,
    pub r: usize,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub x: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub bound: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub value: f64,
    pub holds: bool,
    /// `|value - bound| <= tol`
    pub equality: bool,
    /// `x` is within `1e-9` of an integer
    pub x_integral: bool,
}

impl NikiforovVerdict {
    /// The bound holds, and is attained exactly when `x` is an integer.
    pub fn passed(&self) -> bool {
        self.holds && self.equality == self.x_integral
    }
}

pub fn check_nikiforov(value: f64, m: u64, r: usize, tol: f64) -> NikiforovVerdict {
    let x = nikiforov_x(m, r);
    let bound = m as f64 * x.powi(-(r as i32));
    NikiforovVerdict {
        m,
        r,
        x,
        bound,
        value,
        holds: value <= bound + tol,
        equality: (value - bound).abs() <= tol,
        x_integral: (x - x.round()).abs() <= 1e-9,
    }
}

/// Weights `1/(t-1)` on `[t-2]` and `1/(2(t-1))` on `t-1` and `t`, exactly.
pub fn claim_weighting_exact(t: usize) -> Result<Vec<Ratio<i128>>> {
    if t < 3 {
        return Err(Error::InvalidArgument("the weighting needs t >= 3".into()));
    }
    let full = Ratio::new(1, t as i128 - 1);
    let half = Ratio::new(1, 2 * (t as i128 - 1));
    Ok((1..=t).map(|x| if x + 2 > t { half } else { full }).collect())
}

pub fn claim_weighting(t: usize) -> Result<Weighting> {
    let exact = claim_weighting_exact(t)?;
    Weighting::new(exact.iter().map(|q| *q.numer() as f64 / *q.denom() as f64).collect())
}

/// `H_b`: colex with `C(t,r) - C(t-2,r-2) + b` edges, on `[t]`.
pub fn h_b(t: usize, r: usize, b: u64) -> Result<RGraph> {
    let max_b = binomial(t as u64 - 2, r as u64 - 2) as u64;
    if b > max_b {
        return Err(Error::InvalidArgument(format!("b = {b} exceeds C(t-2, r-2) = {max_b}")));
    }
    let m = binomial(t as u64, r as u64) as u64 - max_b + b;
    colex_segment(m as usize, r)?.with_vertex_count(t)
}

/// `F_a`: colex with `C(t,r) - a` edges, on `[t]`.
pub fn f_a(t: usize, r: usize, a: u64) -> Result<RGraph> {
    let max_a = binomial(t as u64 - 2, r as u64 - 2) as u64;
    if a > max_a {
        return Err(Error::InvalidArgument(format!("a = {a} exceeds C(t-2, r-2) = {max_a}")));
    }
    colex_segment(binomial(t as u64, r as u64) as usize - a as usize, r)?.with_vertex_count(t)
}

/// Absolute slack on the solver-backed inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct HbVerdict {
    pub t: usize,
    pub r: usize,
    pub b: u64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub lambda: f64,
    pub converged: bool,
    /// `lambda(K_{t-1}^(r)) + b / (4 (t-1)^r)`
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub bound: f64,
    /// `w'(H_b)` for the weighting of [`claim_weighting`]
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub constructive: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub slack: f64,
    pub passed: bool,
}

/// `lambda(H_b) >= lambda(K_{t-1}^(r)) + b / (4 (t-1)^r)`, with the constructive weighting
/// attaining the right-hand side.
pub fn lower_bound_hb(t: usize, r: usize, b: u64, cfg: &SolverConfig) -> Result<HbVerdict> {
    let g = h_b(t, r, b)?;
    let bound = clique_lagrangian(t - 1, r) + b as f64 / (4.0 * ((t - 1) as f64).powi(r as i32));
    let constructive = weight_of(&g, &claim_weighting(t)?)?;
    let cert = maximize_lagrangian(&g, cfg);
    Ok(HbVerdict {
        t,
        r,
        b,
        lambda: cert.value,
        converged: cert.converged,
        bound,
        constructive,
        slack: cert.value - bound,
        passed: cert.value >= bound - INEQUALITY_SLACK && (constructive - bound).abs() <= 1e-12,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FaVerdict {
    pub t: usize,
    pub r: usize,
    pub a: u64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub lambda: f64,
    pub converged: bool,
    /// `lambda(K_t^(r)) - a / t^r`
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub linear_bound: f64,
    /// `lambda - linear_bound`, the measured second-order gain
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub surplus: f64,
    pub passed: bool,
}

/// `lambda(F_a) >= lambda(K_t^(r)) - a / t^r`; the surplus is reported as a diagnostic.
pub fn lower_bound_fa(t: usize, r: usize, a: u64, cfg: &SolverConfig) -> Result<FaVerdict> {
    let g = f_a(t, r, a)?;
    let linear_bound = clique_lagrangian(t, r) - a as f64 / (t as f64).powi(r as i32);
    let cert = maximize_lagrangian(&g, cfg);
    let surplus = cert.value - linear_bound;
    Ok(FaVerdict {
        t,
        r,
        a,
        lambda: cert.value,
        converged: cert.converged,
        linear_bound,
        surplus,
        passed: surplus >= -INEQUALITY_SLACK,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightOneVerdict {
    pub t: usize,
    pub r: usize,
    pub a: u64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub w1: f64,
    /// `1 - (1 - 1/t) (1 - a / C(t,r))^(1/(r-1))`
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub bound: f64,
    pub passed: bool,
}

pub fn weight_one_bound_value(t: usize, r: usize, a: u64) -> f64 {
    let n = binomial(t as u64, r as u64) as f64;
    1.0 - (1.0 - 1.0 / t as f64) * (1.0 - a as f64 / n).powf(1.0 / (r as f64 - 1.0))
}

/// Checks the largest weight `w1` of a maximal weighting against the explicit bound.
pub fn weight_one_bound(t: usize, r: usize, a: u64, w1: f64) -> WeightOneVerdict {
    let bound = weight_one_bound_value(t, r, a);
    WeightOneVerdict { t, r, a, w1, bound, passed: w1 <= bound + 1e-9 }
}

#[derive(Clone, Debug, Serialize)]
pub struct MissingEdgeVerdict {
    pub t: usize,
    pub r: usize,
    pub a: u64,
    pub left_compressed: bool,
    /// non-edges through vertex 1
    pub e1: u64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub bound: f64,
    pub passed: bool,
}

/// `e(1) <= r a / t` for a subgraph of `[t]^(r)` with `a` non-edges.
pub fn missing_edge_bound(g: &RGraph) -> Result<MissingEdgeVerdict> {
    let a = g.complement().len() as u64;
    let e1 = g.nonedge_degree(1)? as u64;
    let bound = (g.r() as u64 * a) as f64 / g.t() as f64;
    Ok(MissingEdgeVerdict {
        t: g.t(),
        r: g.r(),
        a,
        left_compressed: is_left_compressed(g),
        e1,
        bound,
        passed: e1 as f64 <= bound,
    })
}

/// Pinned bound on `|lambda - expansion| / (a^3 t^(4 - 3r))` for the expansion sweep.
pub const EXPANSION_RATIO_LIMIT: f64 = 50.0;

#[derive(Clone, Debug, Serialize)]
pub struct NikiforovSweep {
    pub r: usize,
    pub m_max: u64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub tol: f64,
    /// `lambda(colex(m, r))` against `m x^(-r)` for every `m`
    pub rows: Vec<NikiforovVerdict>,
    pub equalities: Vec<u64>,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Checks the real-binomial bound on `lambda(colex(m, r))` for `m = 1..=m_max`, with equality
/// exactly when `x` is an integer.
pub fn nikiforov_sweep(r: usize, m_max: u64, cfg: &SolverConfig, tol: f64) -> Result<NikiforovSweep> {
    if r < 2 {
        return Err(Error::InvalidUniformity(r));
    }
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for m in 1..=m_max {
        let value = maximize_lagrangian(&colex_segment(m as usize, r)?, cfg).value;
        let v = check_nikiforov(value, m, r, tol);
        if !v.holds {
            failures.push(format!("m = {m}: lambda = {} exceeds m x^-r = {}", v.value, v.bound));
        } else if v.equality != v.x_integral {
            failures.push(format!("m = {m}: equality = {} but x = {} integral = {}", v.equality, v.x, v.x_integral));
        }
        rows.push(v);
    }
    let equalities = rows.iter().filter(|v| v.equality).map(|v| v.m).collect();
    Ok(NikiforovSweep { r, m_max, tol, rows, equalities, passed: failures.is_empty(), failures })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionRow {
    pub check: ExpansionCheck,
    pub linear_bound: FaVerdict,
    pub weight_one: WeightOneVerdict,
    pub missing_edge: MissingEdgeVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionSweep {
    pub t: usize,
    pub r: usize,
    pub a_max: u64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub ratio_limit: f64,
    pub rows: Vec<ExpansionRow>,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// For `a = 1..=a_max`, compares `lambda(F_a)` with the four-term expansion and checks the
/// explicit first-order inequalities on `F_a` and its solver witness.
pub fn expansion_sweep(t: usize, r: usize, a_max: u64, cfg: &SolverConfig) -> Result<ExpansionSweep> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for a in 1..=a_max {
        let check = expansion_check(t, r, a, cfg)?;
        let g = f_a(t, r, a)?;
        let cert = maximize_lagrangian(&g, cfg);
        let linear_bound = lower_bound_fa(t, r, a, cfg)?;
        let weight_one = weight_one_bound(t, r, a, cert.decreasing_witness().get(1));
        let missing_edge = missing_edge_bound(&cert.relabel(&g)?)?;
        if !check.converged || check.ratio > EXPANSION_RATIO_LIMIT {
            failures.push(format!("a = {a}: expansion error ratio {} (converged: {})", check.ratio, check.converged));
        }
        if !linear_bound.passed {
            failures.push(format!("a = {a}: lambda below lambda(K_t) - a/t^r by {}", -linear_bound.surplus));
        }
        if !weight_one.passed {
            failures.push(format!("a = {a}: largest weight {} above {}", weight_one.w1, weight_one.bound));
        }
        if !missing_edge.passed {
            failures.push(format!("a = {a}: e(1) = {} above r a / t", missing_edge.e1));
        }
        rows.push(ExpansionRow { check, linear_bound, weight_one, missing_edge });
    }
    Ok(ExpansionSweep { t, r, a_max, ratio_limit: EXPANSION_RATIO_LIMIT, rows, passed: failures.is_empty(), failures })
}
