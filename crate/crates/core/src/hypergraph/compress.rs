//! xy-compressions (shifting) and left-compressed families.

use super::RGraph;
use crate::error::{Error, Result};
use std::collections::HashSet;

/// `C_xy(F)`: swaps `y` for `x` when `y` is in the edge and `x` is not. Requires `x < y`.
pub fn compress_edge(edge: u64, x: usize, y: usize) -> u64 {
    debug_assert!(x < y);
    let (bx, by) = (1u64 << (x - 1), 1u64 << (y - 1));
    if edge & bx == 0 && edge & by != 0 {
        (edge & !by) | bx
    } else {
        edge
    }
}

fn check_pair(g: &RGraph, x: usize, y: usize) -> Result<()> {
    if x == 0 || x >= y || y > g.t() {
        return Err(Error::InvalidArgument(format!("compression needs 1 <= x < y <= {}, got ({x}, {y})", g.t())));
    }
    Ok(())
}

/// Compresses every edge whose image is not already present.
pub fn compress_family(g: &RGraph, x: usize, y: usize) -> Result<RGraph> {
    check_pair(g, x, y)?;
    Ok(compress_unchecked(g, x, y).0)
}

fn compress_unchecked(g: &RGraph, x: usize, y: usize) -> (RGraph, bool) {
    let present: HashSet<u64> = g.edges().iter().copied().collect();
    let mut changed = false;
    let mut edges: Vec<u64> = g
        .edges()
        .iter()
        .map(|&e| {
            let c = compress_edge(e, x, y);
            if c != e && !present.contains(&c) {
                changed = true;
                c
            } else {
                e
            }
        })
        .collect();
    edges.sort_unstable();
    (RGraph::from_sorted_masks_unchecked(g.r(), g.t(), edges), changed)
}

/// `C_xy(G) = G` for every pair `x < y`.
pub fn is_left_compressed(g: &RGraph) -> bool {
    for &e in g.edges() {
        for y in super::vertices_of(e) {
            for x in 1..y {
                let c = compress_edge(e, x, y);
                if c != e && !g.contains(c) {
                    return false;
                }
            }
        }
    }
    true
}

/// Applies compressions (increasing `y`, then increasing `x`) until a full sweep changes nothing.
pub fn left_compress_fixpoint(g: &RGraph) -> RGraph {
    let mut cur = g.clone();
    loop {
        let mut dirty = false;
        for y in 2..=cur.t() {
            for x in 1..y {
                let (next, changed) = compress_unchecked(&cur, x, y);
                if changed {
                    cur = next;
                    dirty = true;
                }
            }
        }
        if !dirty {
            return cur;
        }
    }
}
