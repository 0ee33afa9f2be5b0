//! Uniform hypergraphs on `[t] = {1, ..., t}`.
//!
//! An edge is stored as a 64-bit mask with bit `v - 1` set for vertex `v`,
//! so `t` is capped at [`MAX_VERTICES`]. Read as integers, masks compare in
//! colex order, which is the order edges are kept in.

mod compress;
mod edgelist;
mod iso;
mod order;

pub use compress::{compress_edge, compress_family, is_left_compressed, left_compress_fixpoint};
pub use edgelist::{parse_edge_list, write_edge_list};
pub use iso::{are_isomorphic, canonical_form, canonical_key, MAX_ISO_VERTICES};
pub use order::{
    all_r_subsets, binomial, clique, colex_rank, colex_segment, colex_unrank, lex_cmp, lex_segment, EdgeRankTable,
};

use crate::error::{Error, Result};
use std::collections::BTreeSet;

pub const MAX_VERTICES: usize = 64;

/// Mask with exactly the listed (1-based) vertices set.
pub fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0u64, |m, &v| m | (1u64 << (v - 1)))
}

/// 1-based vertices of a mask, ascending.
pub fn vertices_of(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(v + 1)
        }
    })
}

pub(crate) fn full_mask(t: usize) -> u64 {
    if t >= 64 {
        u64::MAX
    } else {
        (1u64 << t) - 1
    }
}

/// An `r`-uniform hypergraph on the vertex set `[t]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RGraph {
    r: usize,
    t: usize,
    edges: Vec<u64>,
}

impl RGraph {
    fn check_dims(r: usize, t: usize) -> Result<()> {
        if r < 2 {
            return Err(Error::InvalidUniformity(r));
        }
        if t < r || t > MAX_VERTICES {
            return Err(Error::InvalidVertexCount { t, r, max: MAX_VERTICES });
        }
        Ok(())
    }

    pub fn empty(r: usize, t: usize) -> Result<Self> {
        Self::check_dims(r, t)?;
        Ok(RGraph { r, t, edges: Vec::new() })
    }

    /// Builds a graph from vertex lists. Each list must be strictly increasing.
    pub fn new<E: AsRef<[usize]>>(r: usize, t: usize, edges: impl IntoIterator<Item = E>) -> Result<Self> {
        Self::check_dims(r, t)?;
        let mut masks = Vec::new();
        for e in edges {
            let e = e.as_ref();
            let ok = e.len() == r
                && e.windows(2).all(|w| w[0] < w[1])
                && e.first().is_some_and(|&v| v >= 1)
                && e.last().is_some_and(|&v| v <= t);
            if !ok {
                return Err(Error::InvalidEdge { edge: e.to_vec(), r, t });
            }
            masks.push(mask_of(e));
        }
        Self::from_masks(r, t, masks)
    }

    /// Builds a graph from edge masks; rejects wrong sizes, out-of-range bits and duplicates.
    pub fn from_masks(r: usize, t: usize, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::check_dims(r, t)?;
        let full = full_mask(t);
        let mut edges: Vec<u64> = masks.into_iter().collect();
        for &e in &edges {
            if e.count_ones() as usize != r || e & !full != 0 {
                return Err(Error::InvalidEdge { edge: vertices_of(e).collect(), r, t });
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(vertices_of(w[0]).collect()));
        }
        Ok(RGraph { r, t, edges })
    }

    /// Caller guarantees the masks are valid, sorted and distinct.
    pub(crate) fn from_sorted_masks_unchecked(r: usize, t: usize, edges: Vec<u64>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        RGraph { r, t, edges }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Edge masks in colex order.
    pub fn edges(&self) -> &[u64] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.edges.binary_search(&mask).is_ok()
    }

    pub fn edge_tuples(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|&e| vertices_of(e).collect()).collect()
    }

    /// Same edge set on a different ambient vertex count.
    pub fn with_vertex_count(&self, t: usize) -> Result<Self> {
        Self::check_dims(self.r, t)?;
        let full = full_mask(t);
        if let Some(&e) = self.edges.iter().find(|&&e| e & !full != 0) {
            return Err(Error::InvalidEdge { edge: vertices_of(e).collect(), r: self.r, t });
        }
        Ok(RGraph { r: self.r, t, edges: self.edges.clone() })
    }

    /// Largest vertex that lies in some edge (0 for the empty graph).
    pub fn max_vertex(&self) -> usize {
        self.edges.iter().fold(0u64, |acc, &e| acc | e).checked_ilog2().map_or(0, |b| b as usize + 1)
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x == 0 || x > self.t {
            return Err(Error::VertexOutOfRange { vertex: x, t: self.t });
        }
        Ok(())
    }

    /// `d(x)`: number of edges containing `x`.
    pub fn degree(&self, x: usize) -> Result<usize> {
        self.check_vertex(x)?;
        let bit = 1u64 << (x - 1);
        Ok(self.edges.iter().filter(|&&e| e & bit != 0).count())
    }

    /// Degrees of vertices `1..=t`, indexed from zero.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.t];
        for &e in &self.edges {
            for v in vertices_of(e) {
                d[v - 1] += 1;
            }
        }
        d
    }

    /// `e(x)`: number of non-edges (within `[t]^(r)`) containing `x`.
    pub fn nonedge_degree(&self, x: usize) -> Result<usize> {
        let d = self.degree(x)?;
        Ok(binomial(self.t as u64 - 1, self.r as u64 - 1) as usize - d)
    }

    pub fn complement(&self) -> RGraph {
        let edges = all_r_subsets(self.t, self.r).filter(|e| !self.contains(*e)).collect();
        RGraph::from_sorted_masks_unchecked(self.r, self.t, edges)
    }

    /// `N_G(S)`: the sets `e \ S` over edges `e` containing `S`, as masks.
    pub fn link(&self, s: &[usize]) -> Result<Vec<u64>> {
        for &v in s {
            self.check_vertex(v)?;
        }
        let sm = mask_of(s);
        let size = sm.count_ones() as usize;
        if size >= self.r {
            return Err(Error::LinkTooLarge { size, r: self.r });
        }
        Ok(self.link_mask(sm))
    }

    pub(crate) fn link_mask(&self, s: u64) -> Vec<u64> {
        self.edges.iter().filter(|&&e| e & s == s).map(|&e| e & !s).collect()
    }

    /// `x` and `y` are twins when the link of `x` restricted to sets avoiding `y`
    /// equals the link of `y` restricted to sets avoiding `x`.
    pub fn are_twins(&self, x: usize, y: usize) -> Result<bool> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Err(Error::InvalidArgument("twins need two distinct vertices".into()));
        }
        let (bx, by) = (1u64 << (x - 1), 1u64 << (y - 1));
        let nx: BTreeSet<u64> = self.link_mask(bx).into_iter().filter(|f| f & by == 0).collect();
        let ny: BTreeSet<u64> = self.link_mask(by).into_iter().filter(|f| f & bx == 0).collect();
        Ok(nx == ny)
    }

    /// Relabels vertex `v` as `sigma[v - 1]`; `sigma` must be a permutation of `1..=t`.
    pub fn permute(&self, sigma: &[usize]) -> Result<RGraph> {
        let mut seen = vec![false; self.t];
        if sigma.len() != self.t
            || !sigma.iter().all(|&v| v >= 1 && v <= self.t && !std::mem::replace(&mut seen[v - 1], true))
        {
            return Err(Error::InvalidArgument(format!("{sigma:?} is not a permutation of 1..={}", self.t)));
        }
        let mut edges: Vec<u64> =
            self.edges.iter().map(|&e| vertices_of(e).fold(0u64, |m, v| m | 1u64 << (sigma[v - 1] - 1))).collect();
        edges.sort_unstable();
        Ok(RGraph::from_sorted_masks_unchecked(self.r, self.t, edges))
    }

    /// Compact rendering such as `{123, 124}`; vertices are dot-separated once `t > 9`.
    pub fn describe(&self) -> String {
        let sep = if self.t > 9 { "." } else { "" };
        let parts: Vec<String> =
            self.edges.iter().map(|&e| vertices_of(e).map(|v| v.to_string()).collect::<Vec<_>>().join(sep)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}
