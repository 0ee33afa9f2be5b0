//! Canonical forms by exhaustive relabeling.

use super::{vertices_of, RGraph};
use crate::error::{Error, Result};

/// Largest `t` accepted by [`canonical_form`].
pub const MAX_ISO_VERTICES: usize = 10;

/// Upper limit on relabelings tried by [`canonical_key`].
const MAX_KEY_RELABELINGS: u128 = 3_628_800;

fn relabel_sorted(edges: &[u64], label: &[usize], out: &mut Vec<u64>) {
    out.clear();
    out.extend(edges.iter().map(|&e| vertices_of(e).fold(0u64, |m, v| m | 1u64 << label[v - 1])));
    out.sort_unstable();
}

/// The relabeling of `g` whose sorted edge-mask sequence is lexicographically smallest,
/// taken over all `t!` permutations. Requires `t <= MAX_ISO_VERTICES`.
pub fn canonical_form(g: &RGraph) -> Result<RGraph> {
    let t = g.t();
    if t > MAX_ISO_VERTICES {
        return Err(Error::InvalidVertexCount { t, r: g.r(), max: MAX_ISO_VERTICES });
    }
    // zero-based target bit for each vertex; Heap's algorithm over `label`
    let mut label: Vec<usize> = (0..t).collect();
    let mut best: Vec<u64> = Vec::new();
    let mut scratch = Vec::with_capacity(g.len());
    relabel_sorted(g.edges(), &label, &mut best);
    let mut c = vec![0usize; t];
    let mut i = 1;
    while i < t {
        if c[i] < i {
            if i % 2 == 0 {
                label.swap(0, i);
            } else {
                label.swap(c[i], i);
            }
            relabel_sorted(g.edges(), &label, &mut scratch);
            if scratch < best {
                std::mem::swap(&mut scratch, &mut best);
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(RGraph::from_sorted_masks_unchecked(g.r(), t, best))
}

pub fn are_isomorphic(g: &RGraph, h: &RGraph) -> Result<bool> {
    if g.r() != h.r() || g.t() != h.t() || g.len() != h.len() || {
        let (mut a, mut b) = (g.degrees(), h.degrees());
        a.sort_unstable();
        b.sort_unstable();
        a != b
    } {
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

/// Label-independent vertex colouring refined from degrees and co-degrees.
fn refined_colours(g: &RGraph) -> Vec<usize> {
    let t = g.t();
    let mut codeg = vec![vec![0usize; t]; t];
    for &e in g.edges() {
        let vs: Vec<usize> = vertices_of(e).collect();
        for &a in &vs {
            for &b in &vs {
                if a != b {
                    codeg[a - 1][b - 1] += 1;
                }
            }
        }
    }
    let deg = g.degrees();
    let mut sig: Vec<Vec<usize>> = (0..t)
        .map(|v| {
            let mut row: Vec<usize> = (0..t).filter(|&u| u != v).map(|u| codeg[v][u]).collect();
            row.sort_unstable();
            row.insert(0, deg[v]);
            row
        })
        .collect();
    let mut colours = rank_signatures(&sig);
    loop {
        // one round of colour refinement over edges
        for (v, s) in sig.iter_mut().enumerate() {
            let mut around: Vec<Vec<usize>> = g
                .edges()
                .iter()
                .filter(|&&e| e >> v & 1 == 1)
                .map(|&e| {
                    let mut c: Vec<usize> =
                        vertices_of(e).filter(|&u| u != v + 1).map(|u| usize::MAX - colours[u - 1]).collect();
                    c.sort_unstable();
                    c
                })
                .collect();
            around.sort();
            // keep heavy vertices first: invert colours back into signature order
            s.clear();
            s.push(usize::MAX - colours[v]);
            s.extend(around.into_iter().flatten());
        }
        let next = rank_signatures(&sig);
        let count = |c: &[usize]| c.iter().max().map_or(0, |m| m + 1);
        if count(&next) == count(&colours) {
            return next;
        }
        colours = next;
    }
}

fn rank_signatures(sig: &[Vec<usize>]) -> Vec<usize> {
    let mut distinct: Vec<&Vec<usize>> = sig.iter().collect();
    distinct.sort();
    distinct.dedup();
    // higher signatures get smaller colours so heavy vertices land on small labels
    sig.iter().map(|s| distinct.len() - 1 - distinct.binary_search(&s).unwrap()).collect()
}

/// A canonical representative that is cheaper than [`canonical_form`]: vertices are first split
/// into refined colour classes, and only relabelings that keep the classes in colour order are
/// tried. Isomorphic graphs get identical keys, but the key is in general a different
/// representative from `canonical_form`.
pub fn canonical_key(g: &RGraph) -> Result<RGraph> {
    let colours = refined_colours(g);
    let deg = g.degrees();
    let ncol = colours.iter().max().map_or(0, |m| m + 1);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ncol];
    for v in 0..g.t() {
        cells[colours[v]].push(v);
    }
    let mut work: u128 = 1;
    for cell in &cells {
        // isolated vertices never move an edge, so their order is irrelevant
        if deg[cell[0]] > 0 {
            for k in 2..=cell.len() as u128 {
                work = work.saturating_mul(k);
            }
        }
    }
    if work > MAX_KEY_RELABELINGS {
        return Err(Error::SearchTooLarge { size: work, cap: MAX_KEY_RELABELINGS });
    }
    let mut label = vec![0usize; g.t()];
    let mut best: Option<Vec<u64>> = None;
    let mut scratch = Vec::with_capacity(g.len());
    key_search(g, &cells, &deg, 0, 0, &mut label, &mut best, &mut scratch);
    Ok(RGraph::from_sorted_masks_unchecked(g.r(), g.t(), best.unwrap_or_default()))
}

#[allow(clippy::too_many_arguments)]
fn key_search(
    g: &RGraph,
    cells: &[Vec<usize>],
    deg: &[usize],
    cell: usize,
    offset: usize,
    label: &mut [usize],
    best: &mut Option<Vec<u64>>,
    scratch: &mut Vec<u64>,
) {
    if cell == cells.len() {
        relabel_sorted(g.edges(), label, scratch);
        if best.as_ref().is_none_or(|b| *scratch < *b) {
            *best = Some(scratch.clone());
        }
        return;
    }
    let members = &cells[cell];
    let next_offset = offset + members.len();
    if deg[members[0]] == 0 || members.len() == 1 {
        for (i, &v) in members.iter().enumerate() {
            label[v] = offset + i;
        }
        key_search(g, cells, deg, cell + 1, next_offset, label, best, scratch);
        return;
    }
    let mut order = members.clone();
    permute_cell(&mut order, 0, &mut |perm: &[usize]| {
        for (i, &v) in perm.iter().enumerate() {
            label[v] = offset + i;
        }
        key_search(g, cells, deg, cell + 1, next_offset, label, best, scratch);
    });
}

fn permute_cell(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_cell(items, k + 1, visit);
        items.swap(k, i);
    }
}
