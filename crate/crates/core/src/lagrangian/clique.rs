//! Exact Lagrangians of graphs (`r = 2`) through the clique number.

use crate::error::{Error, Result};
use crate::hypergraph::RGraph;

/// Largest `t` accepted by [`motzkin_straus_exact`].
pub const MAX_EXACT_VERTICES: usize = 30;

/// Size of a largest clique of a graph, by branch and bound over adjacency bitsets.
pub fn clique_number(g: &RGraph) -> Result<usize> {
    if g.r() != 2 {
        return Err(Error::WrongUniformity { expected: 2, got: g.r() });
    }
    let t = g.t();
    let mut adj = vec![0u64; t];
    for &e in g.edges() {
        let a = e.trailing_zeros() as usize;
        let b = 63 - e.leading_zeros() as usize;
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let mut best = if t > 0 { 1 } else { 0 };
    expand(&adj, 0, crate::hypergraph::full_mask(t), &mut best);
    Ok(best)
}

fn expand(adj: &[u64], size: usize, mut cand: u64, best: &mut usize) {
    while cand != 0 {
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        let next = cand & adj[v];
        if next == 0 {
            *best = (*best).max(size + 1);
        } else {
            expand(adj, size + 1, next, best);
        }
    }
}

/// `lambda(G) = (1 - 1/omega(G)) / 2` for a graph; requires `r = 2` and `t <= 30`.
pub fn motzkin_straus_exact(g: &RGraph) -> Result<f64> {
    if g.r() != 2 {
        return Err(Error::WrongUniformity { expected: 2, got: g.r() });
    }
    if g.t() > MAX_EXACT_VERTICES {
        return Err(Error::InvalidVertexCount { t: g.t(), r: 2, max: MAX_EXACT_VERTICES });
    }
    if g.is_empty() {
        return Ok(0.0);
    }
    let omega = clique_number(g)? as f64;
    Ok(0.5 * (1.0 - 1.0 / omega))
}
