//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the canonical labelling or group code of the library.

#![allow(dead_code)]

use itertools::Itertools;
use tropmod::{FilteredGraph, MultiGraph};

/// Smallest (over all vertex orderings) matrix of edge multiplicities.
pub fn brute_key(g: &MultiGraph) -> Vec<Vec<usize>> {
    brute_key_with_blocks(g, &vec![0; g.num_edges()])
        .into_iter()
        .map(|row| row.into_iter().map(|cell| cell.len()).collect())
        .collect()
}

/// As `brute_key`, but each matrix entry is the sorted list of blocks of the
/// edges between the two vertices.
pub fn brute_key_with_blocks(g: &MultiGraph, blocks: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let n = g.num_vertices();
    let mut best: Option<Vec<Vec<Vec<usize>>>> = None;
    for perm in (0..n).permutations(n) {
        let mut m = vec![vec![Vec::new(); n]; n];
        for (e, (u, w)) in g.edges().enumerate() {
            let (a, b) = (perm[u].min(perm[w]), perm[u].max(perm[w]));
            m[a][b].push(blocks[e]);
        }
        for row in &mut m {
            for cell in row.iter_mut() {
                cell.sort_unstable();
            }
        }
        if best.as_ref().is_none_or(|b| m < *b) {
            best = Some(m);
        }
    }
    best.unwrap()
}

pub fn filtered_key(fg: &FilteredGraph) -> Vec<Vec<Vec<usize>>> {
    brute_key_with_blocks(fg.graph(), fg.blocks())
}

fn connected_without(g: &MultiGraph, skip: usize) -> bool {
    let n = g.num_vertices();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for (e, (a, b)) in g.edges().enumerate() {
            if e == skip {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Edges whose removal disconnects the graph.
pub fn bridges_brute(g: &MultiGraph) -> Vec<usize> {
    (0..g.num_edges()).filter(|&e| !connected_without(g, e)).collect()
}

/// Whether edge `e` lies on a cycle: a loop, or its ends are joined by a
/// path avoiding it.
pub fn on_cycle(g: &MultiGraph, e: usize) -> bool {
    g.is_loop(e) || connected_without(g, e)
}

pub fn is_stable_brute(g: &MultiGraph) -> bool {
    if !bridges_brute(g).is_empty() {
        return false;
    }
    (0..g.num_vertices()).all(|v| {
        let val: usize = g.edges().map(|(a, b)| usize::from(a == v) + usize::from(b == v)).sum();
        let has_loop = g.edges().any(|(a, b)| a == v && b == v);
        val != 2 || has_loop
    })
}

/// Number of pairs (vertex permutation, half-edge permutation) that
/// preserve incidence, mates and blocks. Loops count both orientations.
pub fn brute_aut_order(g: &MultiGraph, blocks: &[usize]) -> usize {
    brute_iso_count(g, blocks, g, blocks)
}

/// Number of filtered isomorphisms from `(g, bg)` to `(h, bh)`.
pub fn brute_iso_count(g: &MultiGraph, bg: &[usize], h: &MultiGraph, bh: &[usize]) -> usize {
    if g.num_vertices() != h.num_vertices() || g.num_edges() != h.num_edges() {
        return 0;
    }
    let n = g.num_vertices();
    let ge: Vec<(usize, usize)> = g.edges().collect();
    let he: Vec<(usize, usize)> = h.edges().collect();
    let mut total = 0;
    for perm in (0..n).permutations(n) {
        let mut used = vec![false; he.len()];
        total += assign(&ge, bg, &he, bh, &perm, 0, &mut used);
    }
    total
}

fn assign(
    ge: &[(usize, usize)],
    bg: &[usize],
    he: &[(usize, usize)],
    bh: &[usize],
    perm: &[usize],
    e: usize,
    used: &mut [bool],
) -> usize {
    if e == ge.len() {
        return 1;
    }
    let (u, w) = (perm[ge[e].0], perm[ge[e].1]);
    let mut count = 0;
    for f in 0..he.len() {
        if used[f] || bh[f] != bg[e] {
            continue;
        }
        let (a, b) = he[f];
        // each orientation of the image that matches incidence
        let orientations = usize::from(a == u && b == w) + usize::from(a == w && b == u);
        if orientations == 0 {
            continue;
        }
        used[f] = true;
        count += orientations * assign(ge, bg, he, bh, perm, e + 1, used);
        used[f] = false;
    }
    count
}

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}
