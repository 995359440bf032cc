mod common;

use proptest::prelude::*;
use tropmod::iso::{automorphisms, canonical};
use tropmod::z2::rank;
use tropmod::{CellPoly, EdgeSet, FilteredGraph, MultiGraph};

fn multigraph() -> impl Strategy<Value = MultiGraph> {
    (1usize..=5)
        .prop_flat_map(|v| prop::collection::vec((0..v, 0..v), 1..=7).prop_map(move |edges| (v, edges)))
        .prop_filter_map("connected", |(v, edges)| MultiGraph::new(v, &edges).ok())
}

fn relabelled() -> impl Strategy<Value = (MultiGraph, MultiGraph)> {
    multigraph().prop_flat_map(|g| {
        let v: Vec<usize> = (0..g.num_vertices()).collect();
        let e: Vec<usize> = (0..g.num_edges()).collect();
        let flips = prop::collection::vec(any::<bool>(), g.num_edges());
        (Just(v).prop_shuffle(), Just(e).prop_shuffle(), flips)
            .prop_map(move |(p, ep, f)| (g.clone(), g.relabel(&p, &ep, &f)))
    })
}

/// Rank over the two-element field by dense elimination.
fn dense_rank(rows: usize, cols: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<bool>> = cols
        .iter()
        .map(|c| {
            let mut v = vec![false; rows];
            for &r in c {
                v[r as usize] ^= true;
            }
            v
        })
        .collect();
    let mut rank = 0;
    for r in 0..rows {
        let Some(p) = (rank..m.len()).find(|&i| m[i][r]) else {
            continue;
        };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][r] {
                let pivot = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn handshake_and_genus(g in multigraph()) {
        prop_assert_eq!(g.valencies().iter().sum::<usize>(), 2 * g.num_edges());
        prop_assert_eq!(g.genus() as isize, g.num_edges() as isize - g.num_vertices() as isize + 1);
    }

    #[test]
    fn bridges_match_removal(g in multigraph()) {
        let brute: EdgeSet = common::bridges_brute(&g).into_iter().collect();
        prop_assert_eq!(g.bridges(), brute);
        for e in 0..g.num_edges() {
            prop_assert_eq!(g.bridges().contains(e), !common::on_cycle(&g, e));
        }
        prop_assert_eq!(g.is_stable(), common::is_stable_brute(&g));
    }

    #[test]
    fn contracting_forests(g in multigraph(), order in prop::collection::vec(any::<u8>(), 7)) {
        let mut forest = EdgeSet::EMPTY;
        for (i, &k) in order.iter().enumerate().take(g.num_edges()) {
            let e = (k as usize + i) % g.num_edges();
            let mut with = forest;
            with.insert(e);
            if g.is_forest(with) {
                forest = with;
            }
        }
        // contracting a whole tree would leave no edges, which is not a graph here
        prop_assume!(forest.len() < g.num_edges());
        let c = g.contract(forest).unwrap();
        prop_assert_eq!(c.graph.genus(), g.genus());
        prop_assert_eq!(c.graph.num_vertices(), g.num_vertices() - forest.len());
        let cyclic = (0..g.num_edges()).find(|&e| !forest.contains(e) && !g.is_forest(forest.union(EdgeSet::singleton(e))));
        if let Some(e) = cyclic {
            prop_assert!(g.contract(forest.union(EdgeSet::singleton(e))).is_err());
        }
    }

    #[test]
    fn canonical_form_is_a_class_function((g, h) in relabelled()) {
        let a = canonical(&FilteredGraph::trivial(g.clone()));
        let b = canonical(&FilteredGraph::trivial(h.clone()));
        prop_assert_eq!(&a.form, &b.form);
        prop_assert!(a.to_canonical.is_isomorphism(&FilteredGraph::trivial(g), &a.graph));
    }

    #[test]
    fn canonical_form_separates(g in multigraph(), h in multigraph()) {
        let same = canonical(&FilteredGraph::trivial(g.clone())).form == canonical(&FilteredGraph::trivial(h.clone())).form;
        let brute = g.num_vertices() == h.num_vertices() && common::brute_key(&g) == common::brute_key(&h);
        prop_assert_eq!(same, brute);
    }

    #[test]
    fn group_order_matches_brute(g in multigraph()) {
        let blocks = vec![0; g.num_edges()];
        prop_assert_eq!(automorphisms(&FilteredGraph::trivial(g.clone())).order(), common::brute_aut_order(&g, &blocks));
    }

    #[test]
    fn text_round_trip(g in multigraph()) {
        let back: MultiGraph = g.to_text().parse().unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn polynomial_identities(a in prop::collection::vec(-20i64..20, 0..4), b in prop::collection::vec(-20i64..20, 0..4), n in 0u32..4) {
        let (p, q) = (CellPoly::new(a), CellPoly::new(b));
        prop_assert_eq!(p.eval(-1).unwrap(), p.euler());
        let pq = p.mul(&q).unwrap();
        prop_assert_eq!(pq.pow(n).unwrap(), p.pow(n).unwrap().mul(&q.pow(n).unwrap()).unwrap());
        prop_assert_eq!(pq.euler(), p.euler() * q.euler());
    }

    #[test]
    fn sparse_rank_matches_dense(cols in prop::collection::vec(prop::collection::btree_set(0u32..12, 0..5), 0..14)) {
        let cols: Vec<Vec<u32>> = cols.into_iter().map(|s| s.into_iter().collect()).collect();
        prop_assert_eq!(rank(&cols), dense_rank(12, &cols));
    }
}
