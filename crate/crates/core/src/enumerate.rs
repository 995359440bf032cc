//! Isomorphism classes of stable graphs of a fixed genus and of the
//! forest filtrations on them.

use std::collections::{BTreeMap, HashSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, FilteredGraph, MultiGraph};
use crate::iso::{self, AutGroup, CanonicalForm};

#[derive(Clone, Debug, Serialize)]
pub struct StableClass {
    #[serde(skip)]
    pub graph: MultiGraph,
    pub form: CanonicalForm,
    pub genus: usize,
    pub aut_order: usize,
}

#[derive(Clone, Debug)]
pub struct FilteredClass {
    /// Canonical representative.
    pub graph: FilteredGraph,
    pub form: CanonicalForm,
    pub depth: usize,
    pub aut: AutGroup,
}

impl FilteredClass {
    pub fn from_filtered(fg: &FilteredGraph) -> FilteredClass {
        let c = iso::canonical(fg);
        let aut = iso::automorphisms(&c.graph);
        FilteredClass {
            depth: c.graph.depth(),
            graph: c.graph,
            form: c.form,
            aut,
        }
    }

    pub fn dim(&self) -> usize {
        self.depth - 1
    }
}

/// Largest vertex count of a stable graph of genus `g`.
pub fn max_vertices(genus: usize) -> usize {
    if genus <= 1 {
        1
    } else {
        2 * genus - 2
    }
}

/// Non-increasing sequences of `len` integers, each at least `min`, summing to `total`.
fn degree_sequences(len: usize, total: usize, min: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, total: usize, min: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if len == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if total < min * len {
            return;
        }
        let hi = cap.min(total - min * (len - 1));
        for d in (min..=hi).rev() {
            cur.push(d);
            rec(len - 1, total - d, min, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, total, min, total, &mut Vec::new(), &mut out);
    out
}

/// Every loopy multigraph with the given degree sequence, as edge lists.
/// Entries are chosen row by row: loops at `i`, then multiplicities to
/// later vertices, so that row `i` is complete before row `i + 1` starts.
fn multigraphs_with_degrees(degrees: &[usize]) -> Vec<Vec<(usize, usize)>> {
    struct Gen<'a> {
        n: usize,
        rem: Vec<usize>,
        edges: Vec<(usize, usize)>,
        out: &'a mut Vec<Vec<(usize, usize)>>,
    }
    impl Gen<'_> {
        fn row(&mut self, i: usize) {
            if i == self.n {
                self.out.push(self.edges.clone());
                return;
            }
            let r = self.rem[i];
            for l in 0..=r / 2 {
                self.rem[i] -= 2 * l;
                self.edges.extend(std::iter::repeat_n((i, i), l));
                self.spread(i, i + 1);
                self.edges.truncate(self.edges.len() - l);
                self.rem[i] += 2 * l;
            }
        }

        fn spread(&mut self, i: usize, j: usize) {
            if j == self.n {
                if self.rem[i] == 0 {
                    self.row(i + 1);
                }
                return;
            }
            let left: usize = self.rem[j..].iter().sum();
            if left < self.rem[i] {
                return;
            }
            let top = self.rem[i].min(self.rem[j]);
            for m in 0..=top {
                self.rem[i] -= m;
                self.rem[j] -= m;
                self.edges.extend(std::iter::repeat_n((i, j), m));
                self.spread(i, j + 1);
                self.edges.truncate(self.edges.len() - m);
                self.rem[i] += m;
                self.rem[j] += m;
            }
        }
    }
    let mut out = Vec::new();
    Gen {
        n: degrees.len(),
        rem: degrees.to_vec(),
        edges: Vec::new(),
        out: &mut out,
    }
    .row(0);
    out
}

/// All stable graphs of genus `g` up to isomorphism, sorted by canonical form.
pub fn stable_graphs(genus: usize) -> Result<Vec<StableClass>> {
    if genus == 0 {
        return Err(Error::GenusOutOfRange(0));
    }
    let mut jobs = vec![vec![2 * genus]];
    for v in 2..=max_vertices(genus) {
        let e = v + genus - 1;
        jobs.extend(degree_sequences(v, 2 * e, 3));
    }
    let found: Vec<BTreeMap<CanonicalForm, MultiGraph>> = jobs
        .par_iter()
        .map(|degrees| {
            let mut seen = BTreeMap::new();
            for edges in multigraphs_with_degrees(degrees) {
                let Ok(g) = MultiGraph::new(degrees.len(), &edges) else {
                    continue;
                };
                if !g.is_stable() {
                    continue;
                }
                let c = iso::canonical(&FilteredGraph::trivial(g));
                seen.entry(c.form).or_insert_with(|| c.graph.graph().clone());
            }
            seen
        })
        .collect();
    let mut all = BTreeMap::new();
    for m in found {
        all.extend(m);
    }
    Ok(all
        .into_iter()
        .map(|(form, graph)| {
            let aut_order = iso::automorphisms(&FilteredGraph::trivial(graph.clone())).order();
            StableClass {
                genus: graph.genus(),
                graph,
                form,
                aut_order,
            }
        })
        .collect())
}

/// Acyclic sets of non-loop edges, including the empty set.
pub fn forests(g: &MultiGraph) -> Vec<EdgeSet> {
    let candidates: Vec<usize> = (0..g.num_edges()).filter(|&e| !g.is_loop(e)).collect();
    let mut out = Vec::new();
    fn rec(g: &MultiGraph, cand: &[usize], i: usize, cur: EdgeSet, out: &mut Vec<EdgeSet>) {
        if i == cand.len() {
            out.push(cur);
            return;
        }
        rec(g, cand, i + 1, cur, out);
        let mut with = cur;
        with.insert(cand[i]);
        if g.is_forest(with) {
            rec(g, cand, i + 1, with, out);
        }
    }
    rec(g, &candidates, 0, EdgeSet::EMPTY, &mut out);
    out
}

/// Surjections from `k` items onto `0..j` for every `j >= 1`: the ordered
/// set partitions of a `k`-set. For `k = 0` the single empty assignment.
pub fn ordered_set_partitions(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    // restricted growth strings give unordered partitions
    let mut rgs = Vec::new();
    fn rec(k: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            rec(k, cur, max.max(b), out);
            cur.pop();
        }
    }
    let mut cur = vec![0];
    rec(k, &mut cur, 0, &mut rgs);
    let mut out = Vec::new();
    for s in rgs {
        let j = s.iter().max().unwrap() + 1;
        for order in (0..j).permutations(j) {
            out.push(s.iter().map(|&b| order[b]).collect());
        }
    }
    out
}

fn edge_perms(aut: &AutGroup, num_edges: usize) -> Vec<Vec<usize>> {
    aut.iter()
        .map(|a| (0..num_edges).map(|e| a.edge(e)).collect())
        .collect()
}

/// Smallest image of a per-edge labelling under the group.
fn orbit_min(labels: &[u8], perms: &[Vec<usize>]) -> Vec<u8> {
    let mut best = labels.to_vec();
    let mut img = vec![0u8; labels.len()];
    for p in perms {
        for (e, &l) in labels.iter().enumerate() {
            img[p[e]] = l;
        }
        if img < best {
            best.clone_from(&img);
        }
    }
    best
}

/// Forest filtrations of a stable graph up to filtered isomorphism, sorted
/// by depth and then canonical form.
pub fn filtered_structures(class: &StableClass) -> Vec<FilteredClass> {
    let g = &class.graph;
    let ne = g.num_edges();
    let aut = iso::automorphisms(&FilteredGraph::trivial(g.clone()));
    let perms = edge_perms(&aut, ne);
    let mut reps: HashSet<Vec<u8>> = HashSet::new();
    for forest in forests(g) {
        let members: Vec<usize> = forest.iter().collect();
        for assignment in ordered_set_partitions(members.len()) {
            let last = assignment.iter().max().map_or(0, |m| m + 1);
            let mut labels = vec![last as u8; ne];
            for (&e, &b) in members.iter().zip(&assignment) {
                labels[e] = b as u8;
            }
            reps.insert(orbit_min(&labels, &perms));
        }
    }
    let mut out: Vec<FilteredClass> = reps
        .into_iter()
        .map(|labels| {
            let fg = FilteredGraph::from_blocks(g.clone(), labels.iter().map(|&b| b as usize).collect())
                .expect("labels form an ordered partition");
            FilteredClass::from_filtered(&fg)
        })
        .collect();
    out.sort_by(|a, b| (a.depth, &a.form).cmp(&(b.depth, &b.form)));
    out
}

/// Number of automorphism orbits of spanning trees.
pub fn spanning_forest_classes(class: &StableClass) -> usize {
    let g = &class.graph;
    let target = g.num_vertices() - 1;
    let aut = iso::automorphisms(&FilteredGraph::trivial(g.clone()));
    let perms = edge_perms(&aut, g.num_edges());
    forests(g)
        .into_iter()
        .filter(|f| f.len() == target)
        .map(|f| {
            let labels: Vec<u8> = (0..g.num_edges()).map(|e| u8::from(f.contains(e))).collect();
            orbit_min(&labels, &perms)
        })
        .collect::<HashSet<_>>()
        .len()
}

/// Wraps an arbitrary stable graph as a class (canonicalizing it).
pub fn class_of(g: &MultiGraph) -> StableClass {
    let c = iso::canonical(&FilteredGraph::trivial(g.clone()));
    let graph = c.graph.graph().clone();
    StableClass {
        genus: graph.genus(),
        aut_order: iso::automorphisms(&c.graph).order(),
        graph,
        form: c.form,
    }
}
