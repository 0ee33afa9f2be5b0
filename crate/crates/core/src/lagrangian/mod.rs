//! The Lagrangian `lambda(G)`: the maximum of `w(G)` over weightings of `[t]`.

mod clique;
mod kkt;
mod solver;
mod weighting;

pub use clique::{clique_number, motzkin_straus_exact, MAX_EXACT_VERTICES};
pub use kkt::{kkt_residuals, KktResiduals, PairResidual};
pub use solver::{
    ascend, ascend_detailed, gradient, growth_step, link_weight, maximize_lagrangian, start_weighting, weight_of,
    weight_sum, AscentOutcome, LagrangianCertificate, SolverConfig, SupportScan, SUPPORT_SCAN_MAX_VERTICES, ZERO_CLAMP,
};
pub use weighting::{Weighting, SUM_TOL};

use crate::error::{Error, Result};

/// Gives `x` and `y` the average of their weights.
pub fn twin_merge_weighting(w: &Weighting, x: usize, y: usize) -> Result<Weighting> {
    let t = w.len();
    for v in [x, y] {
        if v == 0 || v > t {
            return Err(Error::VertexOutOfRange { vertex: v, t });
        }
    }
    if x == y {
        return Err(Error::InvalidArgument("merge needs two distinct vertices".into()));
    }
    let mut v = w.as_slice().to_vec();
    let avg = 0.5 * (v[x - 1] + v[y - 1]);
    v[x - 1] = avg;
    v[y - 1] = avg;
    Ok(Weighting::from_vec_unchecked(v))
}
