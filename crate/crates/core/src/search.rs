//! Desk-scale exhaustive search for `Lambda(m, r)`: maximize `lambda` over every left-compressed
//! family (or every family up to isomorphism) and compare the winner with colex.

use crate::degrees::{p2, p2_max_bounded, DEFAULT_P2_SEARCH_CAP};
use crate::error::{Error, Result};
use crate::hypergraph::{all_r_subsets, binomial, canonical_key, colex_segment, vertices_of, RGraph, MAX_ISO_VERTICES};
use crate::lagrangian::{
    maximize_lagrangian, motzkin_straus_exact, LagrangianCertificate, SolverConfig, MAX_EXACT_VERTICES,
};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write;

fn check_size(r: usize, m: usize, t: usize) -> Result<u128> {
    RGraph::empty(r, t)?;
    let n = binomial(t as u64, r as u64);
    if m as u128 > n {
        return Err(Error::TooManyEdges { m: m as u128, available: n });
    }
    Ok(n)
}

/// Streams the left-compressed `m`-edge families on `[t]`, each exactly once.
///
/// Left-compressed families are the down-sets of the domination order on sorted `r`-tuples.
/// Colex order is a linear extension of that order, so a depth-first include/exclude walk in
/// colex order only ever has to check that the lower covers of a set were already included.
pub struct LeftCompressed {
    r: usize,
    t: usize,
    m: usize,
    sets: Vec<u64>,
    covers: Vec<Vec<usize>>,
    included: Vec<bool>,
    /// decisions so far: `true` = included
    stack: Vec<bool>,
    count: usize,
    pending_backtrack: bool,
    done: bool,
}

pub fn enumerate_left_compressed(r: usize, m: usize, t: usize) -> Result<LeftCompressed> {
    check_size(r, m, t)?;
    let sets: Vec<u64> = all_r_subsets(t, r).collect();
    let covers = sets
        .iter()
        .map(|&s| {
            // lower covers: lower one element by one where the result stays an r-set
            vertices_of(s)
                .filter(|&v| v > 1 && s & (1u64 << (v - 2)) == 0)
                .map(|v| {
                    let below = s & !(1u64 << (v - 1)) | 1u64 << (v - 2);
                    sets.binary_search(&below).expect("lower covers are r-subsets of [t]")
                })
                .collect()
        })
        .collect();
    Ok(LeftCompressed {
        r,
        t,
        m,
        included: vec![false; sets.len()],
        sets,
        covers,
        stack: Vec::new(),
        count: 0,
        pending_backtrack: false,
        done: false,
    })
}

impl LeftCompressed {
    fn can_include(&self, pos: usize) -> bool {
        self.count < self.m && self.covers[pos].iter().all(|&c| self.included[c])
    }

    fn can_exclude(&self, pos: usize) -> bool {
        self.sets.len() - pos > self.m - self.count
    }

    fn push(&mut self, include: bool) {
        let pos = self.stack.len();
        self.included[pos] = include;
        self.count += include as usize;
        self.stack.push(include);
    }

    /// Undoes decisions until one can be flipped from include to exclude.
    fn backtrack(&mut self) -> bool {
        while let Some(include) = self.stack.pop() {
            let pos = self.stack.len();
            self.included[pos] = false;
            if include {
                self.count -= 1;
                if self.can_exclude(pos) {
                    self.push(false);
                    return true;
                }
            }
        }
        false
    }

    fn current(&self) -> RGraph {
        let edges: Vec<u64> = self.stack.iter().zip(&self.sets).filter(|(&inc, _)| inc).map(|(_, &s)| s).collect();
        RGraph::from_sorted_masks_unchecked(self.r, self.t, edges)
    }
}

impl Iterator for LeftCompressed {
    type Item = RGraph;

    fn next(&mut self) -> Option<RGraph> {
        if self.done {
            return None;
        }
        if self.pending_backtrack {
            self.pending_backtrack = false;
            if !self.backtrack() {
                self.done = true;
                return None;
            }
        }
        loop {
            if self.count == self.m {
                // everything after this point is excluded
                self.pending_backtrack = true;
                return Some(self.current());
            }
            let pos = self.stack.len();
            if pos < self.sets.len() && self.can_include(pos) {
                self.push(true);
            } else if pos < self.sets.len() && self.can_exclude(pos) {
                self.push(false);
            } else if !self.backtrack() {
                self.done = true;
                return None;
            }
        }
    }
}

/// Default cap on `C(C(t, r), m)` for [`enumerate_all_up_to_iso`].
pub const DEFAULT_ISO_CAP: u128 = 1_000_000_000;

/// One representative per isomorphism class of `m`-edge families on `[t]`, built level by level
/// by adding one edge at a time and deduplicating on [`canonical_key`]. Sorted by key.
pub fn enumerate_all_up_to_iso(r: usize, m: usize, t: usize, cap: u128) -> Result<Vec<RGraph>> {
    let n = check_size(r, m, t)?;
    if t > MAX_ISO_VERTICES {
        return Err(Error::InvalidVertexCount { t, r, max: MAX_ISO_VERTICES });
    }
    let size = binomial(n as u64, m as u64);
    if size > cap {
        return Err(Error::SearchTooLarge { size, cap });
    }
    let all: Vec<u64> = all_r_subsets(t, r).collect();
    let mut level: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..m {
        let next = level
            .par_iter()
            .map(|edges| {
                let mut out = BTreeSet::new();
                for &e in &all {
                    if edges.binary_search(&e).is_err() {
                        let g = RGraph::from_masks(r, t, edges.iter().copied().chain([e]))?;
                        out.insert(canonical_key(&g)?.edges().to_vec());
                    }
                }
                Ok(out)
            })
            .try_reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                Ok(a)
            })?;
        level = next.into_iter().collect();
    }
    Ok(level.into_iter().map(|e| RGraph::from_sorted_masks_unchecked(r, t, e)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    LeftCompressed,
    AllUpToIso,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Full-budget solver settings.
    pub solver: SolverConfig,
    /// Random starts for the first pass over every candidate.
    pub screen_starts: usize,
    /// Candidates within this distance of the leader are re-solved at full budget.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub rerun_window: f64,
    /// Tolerance for the colex verdict and for ties.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub tol: f64,
    pub iso_cap: u128,
    /// Keep the per-candidate table in the report.
    pub table: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: SearchMode::LeftCompressed,
            solver: SolverConfig::default(),
            screen_starts: 16,
            rerun_window: 1e-4,
            tol: 1e-7,
            iso_cap: DEFAULT_ISO_CAP,
            table: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateRow {
    pub rank: usize,
    #[serde(serialize_with = "crate::report::ser_graph")]
    pub edges: RGraph,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub lambda: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub kkt_residual: f64,
    pub converged: bool,
    /// Solved again with the full budget.
    pub rerun: bool,
    /// Motzkin–Straus value, for graphs.
    #[serde(serialize_with = "crate::report::ser_opt_f64", skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub r: usize,
    pub m: usize,
    pub t: usize,
    pub mode: SearchMode,
    pub candidates: usize,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub best_value: f64,
    /// Candidates within `tol` of the best, one per isomorphism class when `t <= 10`.
    #[serde(serialize_with = "crate::report::ser_graphs")]
    pub best_families: Vec<RGraph>,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub colex_value: f64,
    pub colex_is_max: bool,
    /// `best_value - colex_value`
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub margin: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub tol: f64,
    /// Ranks of candidates whose best ascent did not converge.
    pub unconverged: Vec<usize>,
    /// Largest `|lambda - exact|` over candidates, for graphs.
    #[serde(serialize_with = "crate::report::ser_opt_f64", skip_serializing_if = "Option::is_none")]
    pub exact_max_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<CandidateRow>>,
}

impl SearchReport {
    /// Colex is a maximizer, every candidate converged, and the graph case agrees with
    /// Motzkin–Straus within `tol`.
    pub fn passed(&self) -> bool {
        self.colex_is_max && self.unconverged.is_empty() && self.exact_max_error.is_none_or(|e| e <= self.tol)
    }
}

fn solve(g: &RGraph, cfg: &SolverConfig) -> LagrangianCertificate {
    maximize_lagrangian(g, cfg)
}

/// Maximizes `lambda` over the candidates of `opts.mode` and compares the best with
/// `lambda(colex(m, r))`. Every candidate gets `opts.screen_starts` random starts; those within
/// `opts.rerun_window` of the leader are re-solved with the full budget. Candidates are solved
/// in parallel and merged in candidate order, so reports do not depend on the thread count.
pub fn ff_verify(r: usize, m: usize, t: usize, opts: &SearchOptions) -> Result<SearchReport> {
    check_size(r, m, t)?;
    let candidates: Vec<RGraph> = match opts.mode {
        SearchMode::LeftCompressed => enumerate_left_compressed(r, m, t)?.collect(),
        SearchMode::AllUpToIso => enumerate_all_up_to_iso(r, m, t, opts.iso_cap)?,
    };
    let screen = SolverConfig { starts: opts.screen_starts.min(opts.solver.starts), ..opts.solver.clone() };
    let mut certs: Vec<LagrangianCertificate> = candidates.par_iter().map(|g| solve(g, &screen)).collect();
    let mut rerun = vec![false; candidates.len()];
    if screen.starts < opts.solver.starts {
        let leader = certs.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
        let close: Vec<usize> = (0..certs.len()).filter(|&i| certs[i].value >= leader - opts.rerun_window).collect();
        let redone: Vec<LagrangianCertificate> =
            close.par_iter().map(|&i| solve(&candidates[i], &opts.solver)).collect();
        for (i, c) in close.into_iter().zip(redone) {
            // keep the better of the two lower bounds
            if c.value >= certs[i].value {
                certs[i] = c;
            }
            rerun[i] = true;
        }
    }
    let exact: Vec<Option<f64>> = if r == 2 && t <= MAX_EXACT_VERTICES {
        candidates.par_iter().map(|g| motzkin_straus_exact(g).ok()).collect()
    } else {
        vec![None; candidates.len()]
    };

    let colex = colex_segment(m, r)?.with_vertex_count(t)?;
    let colex_value = solve(&colex, &opts.solver).value;
    let best_value = certs.iter().map(|c| c.value).fold(colex_value, f64::max);
    let mut best_families = Vec::new();
    let mut seen = BTreeSet::new();
    for (g, c) in candidates.iter().zip(&certs) {
        if c.value >= best_value - opts.tol {
            let key = if t <= MAX_ISO_VERTICES { canonical_key(g)?.edges().to_vec() } else { g.edges().to_vec() };
            if seen.insert(key) {
                best_families.push(g.clone());
            }
        }
    }
    let exact_max_error = exact.iter().zip(&certs).filter_map(|(e, c)| e.map(|e| (e - c.value).abs())).reduce(f64::max);
    let unconverged = (0..certs.len()).filter(|&i| !certs[i].converged).collect();
    let table = opts.table.then(|| {
        candidates
            .iter()
            .zip(&certs)
            .enumerate()
            .map(|(rank, (g, c))| CandidateRow {
                rank,
                edges: g.clone(),
                lambda: c.value,
                kkt_residual: c.kkt_max_residual,
                converged: c.converged,
                rerun: rerun[rank],
                exact: exact[rank],
            })
            .collect()
    });
    Ok(SearchReport {
        r,
        m,
        t,
        mode: opts.mode,
        candidates: candidates.len(),
        best_value,
        best_families,
        colex_value,
        colex_is_max: best_value <= colex_value + opts.tol,
        margin: best_value - colex_value,
        tol: opts.tol,
        unconverged,
        exact_max_error,
        table,
    })
}

/// The per-candidate table as CSV with header `rank,edges,lambda,kkt_residual`; edges are
/// written as `1 2 3|1 2 4`.
pub fn table_csv(rows: &[CandidateRow]) -> String {
    let mut out = String::from("rank,edges,lambda,kkt_residual\n");
    for row in rows {
        let edges: Vec<String> = row
            .edges
            .edge_tuples()
            .iter()
            .map(|e| e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.rank,
            edges.join("|"),
            crate::report::format_f64(row.lambda),
            crate::report::format_f64(row.kkt_residual)
        );
    }
    out
}

/// Every non-edge of `g` within `[t]` contains `{t - i + 1, ..., t}`.
pub fn structure_check_nonedges(g: &RGraph, i: usize) -> bool {
    let t = g.t();
    let tail = (t.saturating_sub(i) + 1..=t).fold(0u64, |m, v| m | 1u64 << (v - 1));
    g.complement().edges().iter().all(|&e| e & tail == tail)
}

#[derive(Clone, Debug, Serialize)]
pub struct P2LinkVerdict {
    pub t: usize,
    pub r: usize,
    /// number of non-edges
    pub a: usize,
    pub p2_complement: u64,
    pub p2_max: u64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub ratio: f64,
    /// Equality is required when `a <= 3`.
    pub exact_required: bool,
    pub passed: bool,
}

/// Compares the P2 of the complement of `g` with `P2(r, a, t)`.
pub fn p2_link_check(g: &RGraph) -> Result<P2LinkVerdict> {
    let c = g.complement();
    let a = c.len();
    let p2_complement = p2(&c);
    let p2_max = if a == 0 { 0 } else { p2_max_bounded(g.r(), a, g.t(), DEFAULT_P2_SEARCH_CAP)?.value };
    let ratio = if p2_max == 0 { 1.0 } else { p2_complement as f64 / p2_max as f64 };
    let exact_required = a <= 3;
    Ok(P2LinkVerdict {
        t: g.t(),
        r: g.r(),
        a,
        p2_complement,
        p2_max,
        ratio,
        exact_required,
        passed: !exact_required || p2_complement == p2_max,
    })
}
