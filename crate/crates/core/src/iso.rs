//! Canonical forms, isomorphisms and automorphism groups of (filtered)
//! multigraphs.
//!
//! The canonical labelling is an individualization-refinement search over
//! vertex orderings. Colour classes are refined by the multiset of
//! `(neighbour colour, blocks of the connecting edges)` together with the
//! blocks of the loops at a vertex; every leaf of the search tree yields an
//! encoded edge list, and the lexicographically smallest one is the form.
//! Parallel edges and loops are then matched up explicitly, which is where
//! edge swaps and loop flips enter the automorphism group.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Contraction, EdgeSet, FilteredGraph, MultiGraph};

/// Byte key with equal values exactly for isomorphic filtered graphs.
///
/// Layout: vertex count, depth, edge count, then one `(a, b, block)` triple
/// per edge with `a <= b`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s.trim()).map_err(|e| Error::Parse(format!("bad hex form: {e}")))?;
        let form = CanonicalForm(bytes);
        form.decode()?;
        Ok(form)
    }

    pub fn num_vertices(&self) -> usize {
        self.0[0] as usize
    }

    pub fn depth(&self) -> usize {
        self.0[1] as usize
    }

    pub fn num_edges(&self) -> usize {
        self.0[2] as usize
    }

    /// The canonical representative described by this form.
    pub fn decode(&self) -> Result<FilteredGraph> {
        let b = &self.0;
        if b.len() < 3 || b.len() != 3 + 3 * b[2] as usize {
            return Err(Error::Parse("truncated canonical form".into()));
        }
        let edges: Vec<(usize, usize)> = b[3..]
            .chunks_exact(3)
            .map(|t| (t[0] as usize, t[1] as usize))
            .collect();
        let blocks: Vec<usize> = b[3..].chunks_exact(3).map(|t| t[2] as usize).collect();
        let graph = MultiGraph::new(b[0] as usize, &edges)?;
        let fg = FilteredGraph::from_blocks(graph, blocks)?;
        if fg.depth() != b[1] as usize {
            return Err(Error::Parse("depth byte disagrees with blocks".into()));
        }
        Ok(fg)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for CanonicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CanonicalForm::from_hex(s)
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalForm::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// A structure-preserving bijection between two graphs, given on vertices
/// and on half-edges. Edges follow their half-edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Isomorphism {
    pub vertices: Vec<usize>,
    pub half_edges: Vec<usize>,
}

/// An isomorphism from a graph to itself.
pub type Automorphism = Isomorphism;

impl Isomorphism {
    pub fn identity(num_vertices: usize, num_half_edges: usize) -> Self {
        Isomorphism {
            vertices: (0..num_vertices).collect(),
            half_edges: (0..num_half_edges).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.iter().enumerate().all(|(i, &v)| i == v)
            && self.half_edges.iter().enumerate().all(|(i, &h)| i == h)
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.vertices[v]
    }

    pub fn half_edge(&self, h: usize) -> usize {
        self.half_edges[h]
    }

    pub fn edge(&self, e: usize) -> usize {
        self.half_edges[2 * e] / 2
    }

    /// Maps `e` onto itself with its two halves exchanged.
    pub fn flips(&self, e: usize) -> bool {
        self.half_edges[2 * e] == 2 * e + 1
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isomorphism) -> Isomorphism {
        Isomorphism {
            vertices: other.vertices.iter().map(|&v| self.vertices[v]).collect(),
            half_edges: other.half_edges.iter().map(|&h| self.half_edges[h]).collect(),
        }
    }

    pub fn inverse(&self) -> Isomorphism {
        let mut vertices = vec![0; self.vertices.len()];
        for (i, &v) in self.vertices.iter().enumerate() {
            vertices[v] = i;
        }
        let mut half_edges = vec![0; self.half_edges.len()];
        for (i, &h) in self.half_edges.iter().enumerate() {
            half_edges[h] = i;
        }
        Isomorphism {
            vertices,
            half_edges,
        }
    }

    /// Checks that this maps `src` onto `dst` preserving incidence, mates and
    /// block indices.
    pub fn is_isomorphism(&self, src: &FilteredGraph, dst: &FilteredGraph) -> bool {
        let (g, h) = (src.graph(), dst.graph());
        if self.vertices.len() != g.num_vertices()
            || self.half_edges.len() != g.num_half_edges()
            || g.num_vertices() != h.num_vertices()
            || g.num_half_edges() != h.num_half_edges()
        {
            return false;
        }
        let mut seen_v = vec![false; h.num_vertices()];
        for &v in &self.vertices {
            if v >= h.num_vertices() || std::mem::replace(&mut seen_v[v], true) {
                return false;
            }
        }
        let mut seen_h = vec![false; h.num_half_edges()];
        for (x, &y) in self.half_edges.iter().enumerate() {
            if y >= h.num_half_edges() || std::mem::replace(&mut seen_h[y], true) {
                return false;
            }
            if self.half_edges[x ^ 1] != y ^ 1 {
                return false;
            }
            if h.vertex_of(y) != self.vertices[g.vertex_of(x)] {
                return false;
            }
            if dst.block_of(y / 2) != src.block_of(x / 2) {
                return false;
            }
        }
        true
    }

    pub fn is_automorphism_of(&self, fg: &FilteredGraph) -> bool {
        self.is_isomorphism(fg, fg)
    }
}

/// All automorphisms of a (filtered) graph, identity first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    elements: Vec<Automorphism>,
}

impl AutGroup {
    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: &Automorphism) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Automorphism> {
        self.elements.iter()
    }

    /// Closed under composition and inverses.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.contains(&a.inverse()) && self.elements.iter().all(|b| self.contains(&a.compose(b)))
        })
    }
}

/// Result of canonical labelling: the form, the canonical representative,
/// and an isomorphism from the input onto that representative.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub form: CanonicalForm,
    pub graph: FilteredGraph,
    pub to_canonical: Isomorphism,
}

type EdgeKey = (u8, u8, u8);

struct Search<'a> {
    fg: &'a FilteredGraph,
    /// Sorted block indices of the edges between each ordered vertex pair.
    adj: Vec<Vec<Vec<usize>>>,
    best: Option<Vec<EdgeKey>>,
    leaves: Vec<Vec<usize>>,
    keep_all: bool,
}

impl<'a> Search<'a> {
    fn new(fg: &'a FilteredGraph, keep_all: bool) -> Self {
        let g = fg.graph();
        let n = g.num_vertices();
        let mut adj = vec![vec![Vec::new(); n]; n];
        for (e, (u, w)) in g.edges().enumerate() {
            adj[u][w].push(fg.block_of(e));
            if u != w {
                adj[w][u].push(fg.block_of(e));
            }
        }
        for row in &mut adj {
            for cell in row.iter_mut() {
                cell.sort_unstable();
            }
        }
        Search {
            fg,
            adj,
            best: None,
            leaves: Vec::new(),
            keep_all,
        }
    }

    fn initial_colours(&self) -> Vec<usize> {
        let n = self.adj.len();
        let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|v| {
                let loops = self.adj[v][v].clone();
                let mut others: Vec<usize> = (0..n)
                    .filter(|&w| w != v)
                    .flat_map(|w| self.adj[v][w].iter().copied())
                    .collect();
                others.sort_unstable();
                (2 * loops.len() + others.len(), loops, others)
            })
            .collect();
        ranks(&sigs)
    }

    fn refine(&self, mut colours: Vec<usize>) -> Vec<usize> {
        let n = colours.len();
        let mut cells = count_distinct(&colours);
        loop {
            let sigs: Vec<(usize, Vec<(usize, &[usize])>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(usize, &[usize])> = (0..n)
                        .filter(|&w| w != v && !self.adj[v][w].is_empty())
                        .map(|w| (colours[w], self.adj[v][w].as_slice()))
                        .collect();
                    nb.sort_unstable();
                    (colours[v], nb)
                })
                .collect();
            colours = ranks(&sigs);
            let now = count_distinct(&colours);
            if now == cells {
                return colours;
            }
            cells = now;
        }
    }

    fn leaf_key(&self, pos: &[usize]) -> Vec<EdgeKey> {
        let g = self.fg.graph();
        let mut key: Vec<EdgeKey> = g
            .edges()
            .enumerate()
            .map(|(e, (u, w))| {
                let (a, b) = (pos[u].min(pos[w]), pos[u].max(pos[w]));
                (a as u8, b as u8, self.fg.block_of(e) as u8)
            })
            .collect();
        key.sort_unstable();
        key
    }

    fn run(&mut self, colours: Vec<usize>) {
        let n = colours.len();
        // target: the first non-singleton cell in rank order
        let mut size = vec![0usize; n];
        for &c in &colours {
            size[c] += 1;
        }
        match (0..n).find(|&c| size[c] > 1) {
            None => {
                let key = self.leaf_key(&colours);
                match self.best.as_ref().map(|b| key.cmp(b)) {
                    None | Some(Ordering::Less) => {
                        self.best = Some(key);
                        self.leaves.clear();
                        self.leaves.push(colours);
                    }
                    Some(Ordering::Equal) => {
                        if self.keep_all || self.leaves.is_empty() {
                            self.leaves.push(colours);
                        }
                    }
                    Some(Ordering::Greater) => {}
                }
            }
            Some(target) => {
                let members: Vec<usize> = (0..n).filter(|&v| colours[v] == target).collect();
                for &v in &members {
                    let mut next = colours.clone();
                    for &w in &members {
                        if w != v {
                            next[w] = target + 1;
                        }
                    }
                    let next = self.refine(next);
                    self.run(next);
                }
            }
        }
    }
}

/// Dense rank of each signature: the number of strictly smaller signatures.
fn ranks<T: Ord>(sigs: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..sigs.len()).collect();
    order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    let mut out = vec![0; sigs.len()];
    for (i, &v) in order.iter().enumerate() {
        out[v] = if i > 0 && sigs[order[i - 1]] == sigs[v] {
            out[order[i - 1]]
        } else {
            i
        };
    }
    out
}

fn count_distinct(colours: &[usize]) -> usize {
    let mut seen = vec![false; colours.len()];
    colours.iter().filter(|&&c| !std::mem::replace(&mut seen[c], true)).count()
}

fn encode(n: usize, depth: usize, key: &[EdgeKey]) -> CanonicalForm {
    let mut bytes = Vec::with_capacity(3 + 3 * key.len());
    bytes.extend([n as u8, depth as u8, key.len() as u8]);
    for &(a, b, c) in key {
        bytes.extend([a, b, c]);
    }
    CanonicalForm(bytes)
}

/// Isomorphism from `fg` to the canonical graph whose edges are `key`,
/// given the vertex positions of a leaf.
fn leaf_isomorphism(fg: &FilteredGraph, pos: &[usize], key: &[EdgeKey]) -> Isomorphism {
    let g = fg.graph();
    let mut taken = vec![false; key.len()];
    let mut half_edges = vec![0; g.num_half_edges()];
    for (e, (u, w)) in g.edges().enumerate() {
        let (pu, pw) = (pos[u], pos[w]);
        let k = (pu.min(pw) as u8, pu.max(pw) as u8, fg.block_of(e) as u8);
        let start = key.partition_point(|x| *x < k);
        let slot = (start..key.len())
            .find(|&i| !taken[i])
            .expect("edge key present in canonical list");
        taken[slot] = true;
        if pu <= pw {
            half_edges[2 * e] = 2 * slot;
            half_edges[2 * e + 1] = 2 * slot + 1;
        } else {
            half_edges[2 * e] = 2 * slot + 1;
            half_edges[2 * e + 1] = 2 * slot;
        }
    }
    Isomorphism {
        vertices: pos.to_vec(),
        half_edges,
    }
}

pub fn canonical(fg: &FilteredGraph) -> Canonical {
    let mut search = Search::new(fg, false);
    let start = search.refine(search.initial_colours());
    search.run(start);
    let key = search.best.take().expect("search reaches a leaf");
    let pos = &search.leaves[0];
    let form = encode(fg.graph().num_vertices(), fg.depth(), &key);
    let to_canonical = leaf_isomorphism(fg, pos, &key);
    let graph = form.decode().expect("canonical form decodes");
    Canonical {
        form,
        graph,
        to_canonical,
    }
}

fn filtered(g: &MultiGraph, partition: Option<&[EdgeSet]>) -> Result<FilteredGraph> {
    match partition {
        None => Ok(FilteredGraph::trivial(g.clone())),
        Some(p) => FilteredGraph::from_partition(g.clone(), p),
    }
}

/// Canonical form of `g`, optionally with an ordered partition of its edges.
pub fn canonical_form(g: &MultiGraph, partition: Option<&[EdgeSet]>) -> Result<CanonicalForm> {
    Ok(canonical(&filtered(g, partition)?).form)
}

/// The full automorphism group of a filtered graph (blocks are preserved
/// index by index).
pub fn automorphisms(fg: &FilteredGraph) -> AutGroup {
    let mut search = Search::new(fg, true);
    let start = search.refine(search.initial_colours());
    search.run(start);
    let g = fg.graph();
    let n = g.num_vertices();
    let base = &search.leaves[0];
    let mut base_inv = vec![0; n];
    for (v, &p) in base.iter().enumerate() {
        base_inv[p] = v;
    }

    // edges grouped by (endpoints, block)
    let class_key = |u: usize, w: usize, e: usize| (u.min(w), u.max(w), fg.block_of(e));
    let mut classes: Vec<((usize, usize, usize), Vec<usize>)> = Vec::new();
    for (e, (u, w)) in g.edges().enumerate() {
        let k = class_key(u, w, e);
        match classes.iter_mut().find(|(ck, _)| *ck == k) {
            Some((_, list)) => list.push(e),
            None => classes.push((k, vec![e])),
        }
    }

    let mut elements = Vec::new();
    for leaf in &search.leaves {
        let p: Vec<usize> = leaf.iter().map(|&x| base_inv[x]).collect();
        // per class, every way to send its edges onto the image class
        let mut options: Vec<Vec<Vec<(usize, usize, bool)>>> = Vec::new();
        for ((u, w, b), src) in &classes {
            let (pu, pw) = (p[*u], p[*w]);
            let target = classes
                .iter()
                .find(|(k, _)| *k == (pu.min(pw), pu.max(pw), *b))
                .map(|(_, l)| l.clone())
                .expect("vertex automorphism preserves edge classes");
            let is_loop = u == w;
            let mut local = Vec::new();
            for perm in target.iter().copied().permutations(target.len()) {
                let flips: Vec<Vec<bool>> = if is_loop {
                    (0..src.len()).map(|_| [false, true]).multi_cartesian_product().collect()
                } else {
                    vec![vec![false; src.len()]]
                };
                for f in flips {
                    let assignment = src
                        .iter()
                        .zip(&perm)
                        .zip(&f)
                        .map(|((&s, &t), &fl)| {
                            let swap = if is_loop {
                                fl
                            } else {
                                g.vertex_of(2 * t) != p[g.vertex_of(2 * s)]
                            };
                            (s, t, swap)
                        })
                        .collect();
                    local.push(assignment);
                }
            }
            options.push(local);
        }
        for combo in options.into_iter().multi_cartesian_product() {
            let mut half_edges = vec![0; g.num_half_edges()];
            for (s, t, swap) in combo.into_iter().flatten() {
                let o = usize::from(swap);
                half_edges[2 * s] = 2 * t + o;
                half_edges[2 * s + 1] = 2 * t + 1 - o;
            }
            elements.push(Isomorphism {
                vertices: p.clone(),
                half_edges,
            });
        }
    }
    elements.sort();
    elements.dedup();
    AutGroup { elements }
}

/// Automorphism group of `g`, optionally filtered by an ordered partition.
pub fn automorphisms_of(g: &MultiGraph, partition: Option<&[EdgeSet]>) -> Result<AutGroup> {
    Ok(automorphisms(&filtered(g, partition)?))
}

/// The automorphism of `(G/E_1, (E_2, ..., E_m))` induced by an automorphism
/// of `(G, (E_1, ..., E_m))`; `s` must be the first block.
pub fn induced_on_contraction(
    fg: &FilteredGraph,
    a: &Automorphism,
    s: EdgeSet,
) -> Result<(FilteredGraph, Contraction, Automorphism)> {
    if fg.depth() < 2 || s != fg.block(0) {
        return Err(Error::NotFirstBlock);
    }
    if !a.is_automorphism_of(fg) {
        return Err(Error::NotAnAutomorphism);
    }
    let (shrunk, c) = fg.shrink_first()?;
    let induced = induced_map(fg.graph(), &c, a);
    Ok((shrunk, c, induced))
}

pub(crate) fn induced_map(g: &MultiGraph, c: &Contraction, a: &Automorphism) -> Automorphism {
    let h = &c.graph;
    let mut vertices = vec![0; h.num_vertices()];
    for v in 0..g.num_vertices() {
        vertices[c.vertex_map[v]] = c.vertex_map[a.vertex(v)];
    }
    let mut half_edges = vec![0; h.num_half_edges()];
    for x in 0..g.num_half_edges() {
        if let Some(nx) = c.half_edge(x) {
            half_edges[nx] = c.half_edge(a.half_edge(x)).expect("automorphism preserves the first block");
        }
    }
    Isomorphism {
        vertices,
        half_edges,
    }
}
