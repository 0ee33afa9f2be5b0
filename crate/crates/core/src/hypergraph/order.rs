//! Colex and lex orders on `r`-subsets, ranked through the combinatorial number system.

use super::{full_mask, RGraph, MAX_VERTICES};
use crate::error::{Error, Result};
use std::cmp::Ordering;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Position of an edge in colex order: `sum_i C(v_i - 1, i)` over its sorted vertices.
pub fn colex_rank(mask: u64) -> u128 {
    super::vertices_of(mask).enumerate().map(|(i, v)| binomial(v as u64 - 1, i as u64 + 1)).sum()
}

/// Inverse of [`colex_rank`] for `r`-subsets of `[64]`.
pub fn colex_unrank(mut rank: u128, r: usize) -> Result<u64> {
    if r == 0 || r > MAX_VERTICES {
        return Err(Error::InvalidUniformity(r));
    }
    if rank >= binomial(MAX_VERTICES as u64, r as u64) {
        return Err(Error::TooManyEdges { m: rank + 1, available: binomial(MAX_VERTICES as u64, r as u64) });
    }
    let mut mask = 0u64;
    for i in (1..=r as u64).rev() {
        // largest c with C(c, i) <= rank
        let mut c = i - 1;
        while binomial(c + 1, i) <= rank {
            c += 1;
        }
        rank -= binomial(c, i);
        mask |= 1u64 << c;
    }
    Ok(mask)
}

/// Every `r`-subset of `[t]` as a mask, in colex order.
pub fn all_r_subsets(t: usize, r: usize) -> impl Iterator<Item = u64> {
    let limit = full_mask(t) as u128;
    let mut next: Option<u128> = if r <= t && r > 0 { Some((1u128 << r) - 1) } else { None };
    std::iter::from_fn(move || {
        let cur = next?;
        if cur > limit {
            next = None;
            return None;
        }
        // Gosper's hack
        let c = cur & cur.wrapping_neg();
        let s = cur + c;
        next = Some((((s ^ cur) >> 2) / c) | s);
        Some(cur as u64)
    })
}

/// Lex comparison: the set holding the minimum of the symmetric difference comes first.
pub fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let low = 1u64 << (a ^ b).trailing_zeros();
    if a & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// The first `m` `r`-subsets of `N` in colex order. `t` is the largest vertex used, at least `r`.
pub fn colex_segment(m: usize, r: usize) -> Result<RGraph> {
    if r < 2 {
        return Err(Error::InvalidUniformity(r));
    }
    if m == 0 {
        return RGraph::empty(r, r);
    }
    let last = colex_unrank(m as u128 - 1, r)?;
    let t = (64 - last.leading_zeros() as usize).max(r);
    let edges: Vec<u64> = all_r_subsets(t, r).take(m).collect();
    Ok(RGraph::from_sorted_masks_unchecked(r, t, edges))
}

/// The first `m` `r`-subsets of `[t]` in lex order.
pub fn lex_segment(m: usize, t: usize, r: usize) -> Result<RGraph> {
    RGraph::empty(r, t)?;
    let available = binomial(t as u64, r as u64);
    if m as u128 > available {
        return Err(Error::TooManyEdges { m: m as u128, available });
    }
    let mut edges = Vec::with_capacity(m);
    let mut idx: Vec<usize> = (1..=r).collect();
    for _ in 0..m {
        edges.push(super::mask_of(&idx));
        // next combination in lexicographic order of sorted tuples
        let mut i = r;
        while i > 0 && idx[i - 1] == t - r + i {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
    edges.sort_unstable();
    Ok(RGraph::from_sorted_masks_unchecked(r, t, edges))
}

/// `K_t^(r)`.
pub fn clique(t: usize, r: usize) -> Result<RGraph> {
    RGraph::empty(r, t)?;
    Ok(RGraph::from_sorted_masks_unchecked(r, t, all_r_subsets(t, r).collect()))
}

/// Bijection between the edges of `K_t^(r)` and `0..C(t, r)` following colex order.
#[derive(Clone, Debug)]
pub struct EdgeRankTable {
    r: usize,
    t: usize,
    edges: Vec<u64>,
}

impl EdgeRankTable {
    pub fn new(t: usize, r: usize) -> Result<Self> {
        Ok(EdgeRankTable { r, t, edges: clique(t, r)?.edges().to_vec() })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn rank(&self, mask: u64) -> Option<usize> {
        if mask.count_ones() as usize != self.r || mask & !full_mask(self.t) != 0 {
            return None;
        }
        Some(colex_rank(mask) as usize)
    }

    pub fn unrank(&self, rank: usize) -> Option<u64> {
        self.edges.get(rank).copied()
    }

    pub fn edges(&self) -> &[u64] {
        &self.edges
    }
}
