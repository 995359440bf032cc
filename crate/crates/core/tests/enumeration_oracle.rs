//! Stable graph enumeration against a brute-force pairing enumeration,
//! deduplicated by trying every vertex permutation.

mod common;

use std::collections::BTreeSet;

use common::{brute_key, is_stable_brute};
use tropmod::enumerate::{filtered_structures, spanning_forest_classes, stable_graphs};
use tropmod::graph::named::*;
use tropmod::MultiGraph;

/// All perfect matchings of `0..k`.
fn pairings(k: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (0..k).collect(), &mut Vec::new(), &mut out);
    out
}

fn degree_sequences(v: usize, total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![3; v];
    loop {
        if cur.iter().sum::<usize>() == total && cur.windows(2).all(|w| w[0] >= w[1]) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == v {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= total {
                break;
            }
            cur[i] = 3;
            i += 1;
        }
    }
}

fn oracle(genus: usize) -> BTreeSet<Vec<Vec<usize>>> {
    let mut found = BTreeSet::new();
    if genus == 1 {
        found.insert(brute_key(&bouquet(1)));
        return found;
    }
    let mut sequences = vec![vec![2 * genus]];
    for v in 2..=2 * genus - 2 {
        sequences.extend(degree_sequences(v, 2 * (v + genus - 1)));
    }
    for degrees in sequences {
        let stub_vertex: Vec<usize> = degrees
            .iter()
            .enumerate()
            .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
            .collect();
        for p in pairings(stub_vertex.len()) {
            let edges: Vec<(usize, usize)> = p.iter().map(|&(a, b)| (stub_vertex[a], stub_vertex[b])).collect();
            let Ok(g) = MultiGraph::new(degrees.len(), &edges) else {
                continue;
            };
            if is_stable_brute(&g) {
                found.insert(brute_key(&g));
            }
        }
    }
    found
}

#[test]
fn matches_pairing_oracle_through_genus_three() {
    for genus in 1..=3 {
        let expected = oracle(genus);
        let got: BTreeSet<_> = stable_graphs(genus).unwrap().iter().map(|c| brute_key(&c.graph)).collect();
        assert_eq!(got.len(), stable_graphs(genus).unwrap().len(), "duplicate classes in genus {genus}");
        assert_eq!(got, expected, "genus {genus}");
    }
}

#[test]
fn enumerated_graphs_are_stable_with_valency_at_least_three() {
    for genus in 1..=4 {
        for c in stable_graphs(genus).unwrap() {
            assert!(c.graph.is_stable());
            assert_eq!(c.graph.genus(), genus);
            let vals = c.graph.valencies();
            assert_eq!(vals.iter().sum::<usize>(), 2 * c.graph.num_edges());
            if genus >= 2 {
                assert!(vals.iter().all(|&d| d >= 3));
            }
        }
    }
}

#[test]
fn filtered_structures_satisfy_forest_condition() {
    for genus in 2..=3 {
        for c in stable_graphs(genus).unwrap() {
            let structures = filtered_structures(&c);
            assert_eq!(structures.iter().filter(|s| s.depth == 1).count(), 1);
            for s in &structures {
                let fg = &s.graph;
                let mut prefix = tropmod::EdgeSet::EMPTY;
                for b in 0..fg.depth() - 1 {
                    prefix = prefix.union(fg.block(b));
                    assert!(fg.graph().is_forest(prefix));
                }
                assert!((0..fg.depth()).all(|b| !fg.block(b).is_empty()));
            }
        }
    }
}

#[test]
fn spanning_forest_examples() {
    let class = |g: &MultiGraph| tropmod::enumerate::class_of(g);
    assert_eq!(spanning_forest_classes(&class(&theta())), 1);
    assert_eq!(spanning_forest_classes(&class(&looped_triangle(2))), 2);
    assert_eq!(spanning_forest_classes(&class(&polygon_with_loops(4))), 4);
}

#[test]
fn cube_graph_contracts_to_bouquet() {
    let cube_like = MultiGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]).unwrap();
    assert_eq!(cube_like.genus(), 3);
    let tree: tropmod::EdgeSet = [0, 1, 2].into_iter().collect();
    let c = cube_like.contract(tree).unwrap();
    assert_eq!(c.graph.genus(), 3);
    assert_eq!(c.graph.num_vertices(), 1);
}
