//! Sums of degrees squared, `P2(H) = sum_x d(x)^2`, and their maxima.

use crate::error::{Error, Result};
use crate::hypergraph::{binomial, canonical_key, colex_segment, lex_cmp, lex_segment, vertices_of, RGraph};
use serde::Serialize;
use std::collections::BTreeSet;

pub fn p2(g: &RGraph) -> u64 {
    g.degrees().iter().map(|&d| (d * d) as u64).sum()
}

/// `sum over ordered pairs (e, f) of |e ∩ f|`, which equals [`p2`].
pub fn p2_pair_identity(g: &RGraph) -> u64 {
    let e = g.edges();
    e.iter().map(|a| e.iter().map(|b| (a & b).count_ones() as u64).sum::<u64>()).sum()
}

/// P2 of `m` edges sharing `r - 1` vertices: `(r - 1) m^2 + m`.
pub fn p2_star_value(r: usize, m: usize) -> u64 {
    let (r, m) = (r as u64, m as u64);
    (r - 1) * m * m + m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    /// Every edge contains a common set of `r - 1` vertices.
    Star,
    /// All edges lie inside `r + 1` vertices.
    CliqueSubgraph,
    Other,
}

/// The structure classes `g` belongs to; a graph can be both a star and a clique subgraph.
pub fn structure_of(g: &RGraph) -> Vec<Structure> {
    let mut out = Vec::new();
    if g.is_empty() {
        return vec![Structure::Other];
    }
    let common = g.edges().iter().fold(u64::MAX, |acc, &e| acc & e);
    if common.count_ones() as usize >= g.r() - 1 {
        out.push(Structure::Star);
    }
    let union = g.edges().iter().fold(0, |acc, &e| acc | e);
    if union.count_ones() as usize <= g.r() + 1 {
        out.push(Structure::CliqueSubgraph);
    }
    if out.is_empty() {
        out.push(Structure::Other);
    }
    out
}

/// `m` edges `{1, ..., r-1, r-1+j}` on `t = r - 1 + m` vertices (at least `r`).
pub fn star(r: usize, m: usize) -> Result<RGraph> {
    let core: Vec<usize> = (1..r).collect();
    let edges = (1..=m).map(|j| {
        let mut e = core.clone();
        e.push(r - 1 + j);
        e
    });
    RGraph::new(r, (r - 1 + m).max(r), edges)
}

/// The first `m` edges of `K_{r+1}^(r)`; all choices are isomorphic.
pub fn clique_subgraph(r: usize, m: usize) -> Result<RGraph> {
    if m > r + 1 {
        return Err(Error::TooManyEdges { m: m as u128, available: r as u128 + 1 });
    }
    colex_segment(m, r)?.with_vertex_count(r + 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct P2Report {
    pub r: usize,
    pub m: usize,
    /// `None` for the unbounded problem.
    pub t: Option<usize>,
    pub value: u64,
    /// Degrees of the first maximizer, nonincreasing.
    pub degree_sequence: Vec<usize>,
    pub structures: Vec<Structure>,
    #[serde(serialize_with = "crate::report::ser_graphs")]
    pub maximizers: Vec<RGraph>,
}

fn sorted_degrees(g: &RGraph) -> Vec<usize> {
    let mut d = g.degrees();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// `P2(r, m)` with no bound on the number of vertices: the star value, attained by stars and,
/// when `m <= r + 1`, also by subgraphs of `K_{r+1}^(r)`.
pub fn p2_max_unbounded(r: usize, m: usize) -> Result<P2Report> {
    if r < 2 {
        return Err(Error::InvalidUniformity(r));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("P2(r, m) needs m >= 1".into()));
    }
    let mut maximizers = vec![star(r, m)?];
    let mut structures = vec![Structure::Star];
    if m <= r + 1 {
        let c = clique_subgraph(r, m)?;
        debug_assert_eq!(p2(&c), p2_star_value(r, m));
        maximizers.push(c);
        structures.push(Structure::CliqueSubgraph);
    }
    Ok(P2Report {
        r,
        m,
        t: None,
        value: p2_star_value(r, m),
        degree_sequence: sorted_degrees(&maximizers[0]),
        structures,
        maximizers,
    })
}

/// Default cap on `C(C(t, r), m)` for the bounded search.
pub const DEFAULT_P2_SEARCH_CAP: u128 = 1_000_000_000_000;

/// Branch and bound for `P2(r, m, t)`.
///
/// Edges are scanned in lex order, so vertex `v` has its final degree once every edge with
/// minimum `v` has been decided. Only labelings with `d(1) >= d(2) >= ... >= d(t)` are explored
/// (every isomorphism class has one), and a branch is cut when even the `r k` largest
/// remaining degree increments cannot reach the best value. Ties are kept so that every
/// maximizer class is found.
struct BoundedSearch {
    r: usize,
    t: usize,
    m: usize,
    /// edges in lex order, as zero-based vertex lists
    edges: Vec<Vec<usize>>,
    masks: Vec<u64>,
    /// `avail[i][x]`: edges with index `>= i` containing vertex `x`
    avail: Vec<Vec<usize>>,
    /// `finalized_at[i]`: the vertex whose last edge is at index `i - 1`, if any
    finalized_at: Vec<Option<usize>>,
    best: u64,
    found: BTreeSet<RGraph>,
    chosen: Vec<u64>,
    deg: Vec<usize>,
    marginals: Vec<u64>,
}

impl BoundedSearch {
    fn new(r: usize, m: usize, t: usize, seed_value: u64) -> Self {
        let mut masks: Vec<u64> = crate::hypergraph::all_r_subsets(t, r).collect();
        masks.sort_by(|&a, &b| lex_cmp(a, b));
        let edges: Vec<Vec<usize>> = masks.iter().map(|&e| vertices_of(e).map(|v| v - 1).collect()).collect();
        let n = masks.len();
        let mut avail = vec![vec![0usize; t]; n + 1];
        for i in (0..n).rev() {
            avail[i] = avail[i + 1].clone();
            for &v in &edges[i] {
                avail[i][v] += 1;
            }
        }
        let mut finalized_at = vec![None; n + 1];
        for i in 0..n {
            let here = edges[i][0];
            if i + 1 == n || edges[i + 1][0] != here {
                finalized_at[i + 1] = Some(here);
            }
        }
        BoundedSearch {
            r,
            t,
            m,
            edges,
            masks,
            avail,
            finalized_at,
            best: seed_value,
            found: BTreeSet::new(),
            chosen: Vec::with_capacity(m),
            deg: vec![0; t],
            marginals: Vec::new(),
        }
    }

    fn upper_bound(&mut self, i: usize, current: u64, cap: usize) -> u64 {
        let k = self.m - self.chosen.len();
        self.marginals.clear();
        for x in 0..self.t {
            let room = cap.saturating_sub(self.deg[x]);
            let g = self.avail[i][x].min(k).min(room);
            let d = self.deg[x] as u64;
            self.marginals.extend((0..g as u64).map(|j| 2 * (d + j) + 1));
        }
        let need = self.r * k;
        if self.marginals.len() < need {
            return 0;
        }
        self.marginals.sort_unstable_by(|a, b| b.cmp(a));
        current + self.marginals[..need].iter().sum::<u64>()
    }

    /// `cap`: degree of the last vertex whose degree is final (no later vertex may exceed it).
    fn dfs(&mut self, i: usize, current: u64, cap: usize) -> Result<()> {
        let mut cap = cap;
        if let Some(v) = self.finalized_at[i] {
            if self.deg[v] > cap || self.deg[v + 1..].iter().any(|&d| d > self.deg[v]) {
                return Ok(());
            }
            cap = self.deg[v];
        }
        if self.chosen.len() == self.m {
            if self.deg.windows(2).all(|w| w[0] >= w[1]) && current >= self.best {
                if current > self.best {
                    self.best = current;
                    self.found.clear();
                }
                let g = RGraph::from_masks(self.r, self.t, self.chosen.iter().copied())?;
                self.found.insert(canonical_key(&g)?);
            }
            return Ok(());
        }
        let n = self.masks.len();
        if n - i < self.m - self.chosen.len() || self.upper_bound(i, current, cap) < self.best {
            return Ok(());
        }
        // include edge i
        if self.edges[i].iter().all(|&v| self.deg[v] < cap) {
            let gain: u64 = self.edges[i].iter().map(|&v| 2 * self.deg[v] as u64 + 1).sum();
            for k in 0..self.r {
                self.deg[self.edges[i][k]] += 1;
            }
            self.chosen.push(self.masks[i]);
            self.dfs(i + 1, current + gain, cap)?;
            self.chosen.pop();
            for k in 0..self.r {
                self.deg[self.edges[i][k]] -= 1;
            }
        }
        self.dfs(i + 1, current, cap)
    }
}

/// Exact `P2(r, m, t)` with every maximizer up to isomorphism. Rejects searches whose raw
/// size `C(C(t, r), m)` exceeds `cap`.
pub fn p2_max_bounded(r: usize, m: usize, t: usize, cap: u128) -> Result<P2Report> {
    RGraph::empty(r, t)?;
    let n = binomial(t as u64, r as u64);
    if m as u128 > n {
        return Err(Error::TooManyEdges { m: m as u128, available: n });
    }
    let size = binomial(n as u64, m as u64);
    if size > cap {
        return Err(Error::SearchTooLarge { size, cap });
    }
    // any achievable value is a valid starting threshold since ties are kept
    let mut seed = p2(&lex_segment(m, t, r)?);
    if let Ok(c) = colex_segment(m, r) {
        if c.t() <= t {
            seed = seed.max(p2(&c));
        }
    }
    if r - 1 + m <= t {
        seed = seed.max(p2_star_value(r, m));
    }
    let mut search = BoundedSearch::new(r, m, t, seed);
    search.dfs(0, 0, usize::MAX)?;
    let maximizers: Vec<RGraph> = search.found.into_iter().collect();
    let first = maximizers.first().ok_or_else(|| Error::InvalidArgument("bounded search found no graph".into()))?;
    let mut structures: Vec<Structure> = maximizers.iter().flat_map(structure_of).collect();
    structures.sort();
    structures.dedup();
    Ok(P2Report {
        r,
        m,
        t: Some(t),
        value: search.best,
        degree_sequence: sorted_degrees(first),
        structures,
        maximizers,
    })
}

/// The 11-edge 3-graph on `[7]` whose P2 beats every lex and complement-of-lex graph.
pub fn ak_counterexample() -> RGraph {
    RGraph::new(
        3,
        7,
        [
            [1, 2, 3],
            [1, 2, 4],
            [1, 2, 5],
            [1, 2, 6],
            [1, 2, 7],
            [1, 3, 4],
            [1, 3, 5],
            [1, 3, 6],
            [1, 4, 5],
            [1, 4, 6],
            [1, 5, 6],
        ],
    )
    .expect("valid edges")
}

#[derive(Clone, Debug, Serialize)]
pub struct AkRow {
    pub t: usize,
    pub lex: u64,
    pub complement_of_lex: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AkReport {
    pub counterexample: u64,
    pub counterexample_degrees: Vec<usize>,
    pub t_range: (usize, usize),
    pub rows: Vec<AkRow>,
    pub colex: u64,
    pub family_max: u64,
    /// e.g. `lex(11,7,3)`
    pub family_argmax: String,
    pub claimed_bound: u64,
    pub passed: bool,
    pub failures: Vec<String>,
}

pub const AK_EDGES: usize = 11;
pub const AK_CLAIMED_BOUND: u64 = 209;
pub const AK_COUNTEREXAMPLE_P2: u64 = 211;
/// Default vertex range for the lex scan; the counterexample lives on `[7]`.
pub const AK_DEFAULT_T_RANGE: (usize, usize) = (6, 7);

/// Recomputes P2 of the counterexample and of every lex and complement-of-lex 3-graph with
/// 11 edges for `t` in `t_min..=t_max`. The report fails unless the counterexample has
/// P2 = 211 and no family member exceeds 209.
pub fn verify_ak_counterexample(t_min: usize, t_max: usize) -> Result<AkReport> {
    if t_min > t_max || t_min < 6 {
        return Err(Error::InvalidArgument(format!(
            "t range {t_min}..={t_max} must start at 6 or more (C(t,3) >= 11)"
        )));
    }
    let h = ak_counterexample();
    let counterexample = p2(&h);
    let mut rows = Vec::new();
    let colex = p2(&colex_segment(AK_EDGES, 3)?);
    let mut family_max = colex;
    let mut family_argmax = format!("colex({AK_EDGES},3)");
    for t in t_min..=t_max {
        let n = binomial(t as u64, 3) as usize;
        let lex = p2(&lex_segment(AK_EDGES, t, 3)?);
        let comp = p2(&lex_segment(n - AK_EDGES, t, 3)?.complement());
        for (v, name) in
            [(lex, format!("lex({AK_EDGES},{t},3)")), (comp, format!("complement(lex({},{t},3))", n - AK_EDGES))]
        {
            if v > family_max {
                family_max = v;
                family_argmax = name;
            }
        }
        rows.push(AkRow { t, lex, complement_of_lex: comp });
    }
    let mut failures = Vec::new();
    if counterexample != AK_COUNTEREXAMPLE_P2 {
        failures.push(format!("P2(H) = {counterexample}, expected {AK_COUNTEREXAMPLE_P2}"));
    }
    if family_max > AK_CLAIMED_BOUND {
        failures.push(format!("{family_argmax} has P2 = {family_max} > {AK_CLAIMED_BOUND}"));
    }
    if family_max >= counterexample {
        failures.push(format!("family maximum {family_max} is not below P2(H) = {counterexample}"));
    }
    Ok(AkReport {
        counterexample,
        counterexample_degrees: sorted_degrees(&h),
        t_range: (t_min, t_max),
        rows,
        colex,
        family_max,
        family_argmax,
        claimed_bound: AK_CLAIMED_BOUND,
        passed: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{all_r_subsets, are_isomorphic, clique};
    use proptest::prelude::*;

    #[test]
    fn p2_examples() {
        let h = ak_counterexample();
        assert_eq!(p2(&h), 211);
        assert_eq!(p2_pair_identity(&h), 211);
        assert_eq!(sorted_degrees(&h), vec![11, 5, 4, 4, 4, 4, 1]);
        assert_eq!(h.degree(1).unwrap(), 11);
        assert_eq!(p2(&clique(4, 3).unwrap()), 36);
        assert_eq!(p2(&star(3, 4).unwrap()), 36);
    }

    #[test]
    fn pair_identity_small_cases() {
        assert_eq!(p2_pair_identity(&RGraph::new(3, 3, [[1, 2, 3]]).unwrap()), 3);
        assert_eq!(p2_pair_identity(&RGraph::new(3, 6, [[1, 2, 3], [4, 5, 6]]).unwrap()), 6);
    }

    #[test]
    fn star_values() {
        assert_eq!(p2_star_value(3, 4), 36);
        assert_eq!(p2_star_value(3, 11), 253);
        assert_eq!(p2_star_value(2, 1), 2);
        for r in 2..=5 {
            for m in 1..=30 {
                assert_eq!(p2(&star(r, m).unwrap()), p2_star_value(r, m));
            }
        }
    }

    #[test]
    fn unbounded_maximum() {
        let rep = p2_max_unbounded(3, 4).unwrap();
        assert_eq!(rep.value, 36);
        assert_eq!(rep.structures, vec![Structure::Star, Structure::CliqueSubgraph]);
        let rep = p2_max_unbounded(3, 12).unwrap();
        assert_eq!(rep.value, 300);
        assert_eq!(rep.structures, vec![Structure::Star]);
        assert_eq!(p2_max_unbounded(4, 2).unwrap().value, 14);
        for r in 2..=6 {
            for m in 1..=30 {
                let rep = p2_max_unbounded(r, m).unwrap();
                assert_eq!(rep.value, p2_star_value(r, m));
                for g in &rep.maximizers {
                    assert_eq!(p2(g), rep.value);
                }
                if m <= r + 1 {
                    // m (m-1)^2 + (r+1-m) m^2 = (r-1) m^2 + m
                    let (rr, mm) = (r as i64, m as i64);
                    assert_eq!(mm * (mm - 1) * (mm - 1) + (rr + 1 - mm) * mm * mm, (rr - 1) * mm * mm + mm);
                }
            }
        }
    }

    // every m-subset of [t]^(r), for the brute-force oracles
    fn all_families(r: usize, m: usize, t: usize) -> Vec<RGraph> {
        let all: Vec<u64> = all_r_subsets(t, r).collect();
        let mut out = Vec::new();
        let mut pick = Vec::new();
        fn rec(all: &[u64], start: usize, m: usize, r: usize, t: usize, pick: &mut Vec<u64>, out: &mut Vec<RGraph>) {
            if pick.len() == m {
                out.push(RGraph::from_masks(r, t, pick.iter().copied()).unwrap());
                return;
            }
            for i in start..all.len() {
                pick.push(all[i]);
                rec(all, i + 1, m, r, t, pick, out);
                pick.pop();
            }
        }
        rec(&all, 0, m, r, t, &mut pick, &mut out);
        out
    }

    fn brute_force(r: usize, m: usize, t: usize) -> (u64, usize) {
        let fams = all_families(r, m, t);
        let best = fams.iter().map(p2).max().unwrap();
        let classes: BTreeSet<RGraph> =
            fams.iter().filter(|g| p2(g) == best).map(|g| canonical_key(g).unwrap()).collect();
        (best, classes.len())
    }

    #[test]
    fn bounded_matches_brute_force() {
        for (r, m, t) in
            [(2, 3, 3), (2, 4, 5), (2, 6, 6), (3, 3, 5), (3, 4, 6), (3, 5, 6), (3, 6, 6), (4, 3, 6), (3, 2, 5)]
        {
            let rep = p2_max_bounded(r, m, t, DEFAULT_P2_SEARCH_CAP).unwrap();
            let (best, classes) = brute_force(r, m, t);
            assert_eq!(rep.value, best, "({r},{m},{t})");
            assert_eq!(rep.maximizers.len(), classes, "({r},{m},{t})");
        }
    }

    #[test]
    fn bounded_examples() {
        let tri = p2_max_bounded(2, 3, 3, DEFAULT_P2_SEARCH_CAP).unwrap();
        assert_eq!(tri.value, 12);
        assert_eq!(tri.maximizers.len(), 1);
        assert_eq!(p2_max_bounded(3, 10, 5, DEFAULT_P2_SEARCH_CAP).unwrap().value, 180);

        let rep = p2_max_bounded(3, 4, 6, DEFAULT_P2_SEARCH_CAP).unwrap();
        assert_eq!(rep.value, 36);
        assert_eq!(rep.maximizers.len(), 2);
        assert!(rep.maximizers.iter().any(|g| are_isomorphic(g, &star(3, 4).unwrap()).unwrap()));
        assert!(rep
            .maximizers
            .iter()
            .any(|g| are_isomorphic(g, &clique(4, 3).unwrap().with_vertex_count(6).unwrap()).unwrap()));
        assert!(matches!(p2_max_bounded(3, 11, 7, 1000), Err(Error::SearchTooLarge { .. })));
    }

    #[test]
    fn counterexample_is_the_bounded_maximum() {
        let rep = p2_max_bounded(3, 11, 7, DEFAULT_P2_SEARCH_CAP).unwrap();
        assert_eq!(rep.value, 211);
        let h = canonical_key(&ak_counterexample()).unwrap();
        assert!(rep.maximizers.contains(&h));
    }

    #[test]
    fn ak_report() {
        let rep = verify_ak_counterexample(7, 7).unwrap();
        assert!(rep.passed, "{:?}", rep.failures);
        assert_eq!(rep.family_max, 209);
        assert_eq!(rep.family_argmax, "lex(11,7,3)");
        let wide = verify_ak_counterexample(6, 12).unwrap();
        assert!(!wide.passed);
        assert_eq!(wide.rows[2].lex, 213);
    }

    proptest! {
        #[test]
        fn pair_identity_holds(r in 2usize..=4, t in 4usize..=8, pick in proptest::collection::vec(any::<bool>(), 70)) {
            let edges: Vec<u64> = all_r_subsets(t, r).zip(&pick).filter(|(_, &p)| p).map(|(e, _)| e).collect();
            let g = RGraph::from_masks(r, t, edges).unwrap();
            prop_assert_eq!(p2(&g), p2_pair_identity(&g));
        }
    }
}
