//! First-order conditions at a maximal weighting, recomputed from links.
//!
//! For a maximal `w` and every `x` with `w(x) > 0`, `w(N(x)) = r w(G)`; for every pair with
//! positive weights, `w(N(x,y)) (w(x) - w(y)) = w(N_y(x)) - w(N_x(y))`, where `N_y(x)` is the
//! part of the link of `x` avoiding `y`.

use super::weighting::Weighting;
use crate::error::{Error, Result};
use crate::hypergraph::{vertices_of, RGraph};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PairResidual {
    pub x: usize,
    pub y: usize,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KktResiduals {
    /// `|w(N(x)) - r w(G)|` for vertices of positive weight, `None` elsewhere.
    pub vertex: Vec<Option<f64>>,
    pub pairs: Vec<PairResidual>,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_vertex: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_pair: f64,
    /// Largest `w(N(x)) - r w(G)` over zero-weight vertices, floored at zero.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_dual_violation: f64,
}

fn family_weight(family: impl IntoIterator<Item = u64>, w: &Weighting) -> f64 {
    family.into_iter().map(|f| vertices_of(f).map(|v| w.get(v)).product::<f64>()).sum()
}

pub fn kkt_residuals(g: &RGraph, w: &Weighting) -> Result<KktResiduals> {
    if w.len() != g.t() {
        return Err(Error::DimensionMismatch { got: w.len(), expected: g.t() });
    }
    let t = g.t();
    let value = family_weight(g.edges().iter().copied(), w);
    let rp = g.r() as f64 * value;
    let links: Vec<Vec<u64>> = (1..=t).map(|x| g.link_mask(1u64 << (x - 1))).collect();

    let mut vertex = vec![None; t];
    let mut max_vertex: f64 = 0.0;
    let mut max_dual: f64 = 0.0;
    for x in 1..=t {
        let nx = family_weight(links[x - 1].iter().copied(), w);
        if w.get(x) > 0.0 {
            let res = (nx - rp).abs();
            max_vertex = max_vertex.max(res);
            vertex[x - 1] = Some(res);
        } else {
            max_dual = max_dual.max(nx - rp);
        }
    }

    let mut pairs = Vec::new();
    let mut max_pair: f64 = 0.0;
    for x in 1..=t {
        for y in x + 1..=t {
            if w.get(x) <= 0.0 || w.get(y) <= 0.0 {
                continue;
            }
            let (bx, by) = (1u64 << (x - 1), 1u64 << (y - 1));
            let nxy = if g.r() >= 2 { family_weight(g.link_mask(bx | by), w) } else { 0.0 };
            let ny_x = family_weight(links[x - 1].iter().copied().filter(|f| f & by == 0), w);
            let nx_y = family_weight(links[y - 1].iter().copied().filter(|f| f & bx == 0), w);
            let residual = (nxy * (w.get(x) - w.get(y)) - (ny_x - nx_y)).abs();
            max_pair = max_pair.max(residual);
            pairs.push(PairResidual { x, y, residual });
        }
    }
    Ok(KktResiduals { vertex, pairs, max_vertex, max_pair, max_dual_violation: max_dual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{clique, colex_segment};
    use crate::lagrangian::{maximize_lagrangian, SolverConfig};
    use num_rational::Ratio;

    #[test]
    fn clique_uniform_is_exactly_stationary() {
        let k4 = clique(4, 3).unwrap();
        let res = kkt_residuals(&k4, &Weighting::uniform(4)).unwrap();
        assert_eq!(res.max_vertex, 0.0);
        assert_eq!(res.max_pair, 0.0);

        // same identities in exact arithmetic: w(N(x)) = 3/16 = r w(G) = 3 * 1/16
        let q = Ratio::new(1i64, 4);
        let link_of_1 = Ratio::from_integer(3) * q * q;
        let total = Ratio::from_integer(4) * q * q * q;
        assert_eq!(link_of_1, Ratio::from_integer(3) * total);
    }

    #[test]
    fn converged_certificates_satisfy_both_identities() {
        let cfg = SolverConfig { starts: 16, ..SolverConfig::default() };
        for m in [5, 7, 9, 13, 17] {
            let g = colex_segment(m, 3).unwrap();
            let c = maximize_lagrangian(&g, &cfg);
            assert!(c.converged, "m={m}");
            let res = kkt_residuals(&g, &c.witness).unwrap();
            assert!(res.max_vertex <= 1e-8, "m={m}: {}", res.max_vertex);
            assert!(res.max_pair <= 1e-8, "m={m}: {}", res.max_pair);
        }
    }

    #[test]
    fn twin_pairs_with_equal_weight_have_zero_pair_residual() {
        let g = RGraph::new(3, 5, [[1, 2, 3], [1, 2, 4], [3, 4, 5]]).unwrap();
        assert!(g.are_twins(3, 4).unwrap());
        let w = Weighting::new(vec![0.3, 0.2, 0.15, 0.15, 0.2]).unwrap();
        let res = kkt_residuals(&g, &w).unwrap();
        let p = res.pairs.iter().find(|p| (p.x, p.y) == (3, 4)).unwrap();
        assert_eq!(p.residual, 0.0);
    }
}
