//! Connected multigraphs in half-edge form.
//!
//! Edge `e` owns the half-edges `2e` and `2e + 1`, so the mate of a half-edge
//! is `h ^ 1` and the pairing is a fixed-point-free involution by construction.
//! A loop is an edge whose two halves sit at the same vertex.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_EDGES: usize = 64;

/// A subset of the edge ids of one graph, stored as a bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeSet(u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn from_mask(mask: u64) -> Self {
        EdgeSet(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn singleton(e: usize) -> Self {
        EdgeSet(1 << e)
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_EDGES && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1 << e;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let e = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(e)
            }
        })
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = EdgeSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiGraph {
    num_vertices: usize,
    /// Vertex of each half-edge.
    ends: Vec<usize>,
}

impl MultiGraph {
    /// Builds a graph from an edge list; loops are pairs `(v, v)`.
    pub fn new(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let g = Self::new_unchecked(num_vertices, edges)?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub(crate) fn new_unchecked(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if edges.len() > MAX_EDGES {
            return Err(Error::TooManyEdges(edges.len()));
        }
        let mut ends = Vec::with_capacity(2 * edges.len());
        for &(u, w) in edges {
            if u >= num_vertices || w >= num_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {w}) references a vertex outside 0..{num_vertices}"
                )));
            }
            ends.push(u);
            ends.push(w);
        }
        Ok(MultiGraph { num_vertices, ends })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len() / 2
    }

    pub fn num_half_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.ends[h]
    }

    pub fn mate(h: usize) -> usize {
        h ^ 1
    }

    pub fn edge_of(h: usize) -> usize {
        h / 2
    }

    pub fn half_edges(e: usize) -> [usize; 2] {
        [2 * e, 2 * e + 1]
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.ends[2 * e], self.ends[2 * e + 1])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ends.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    pub fn all_edges(&self) -> EdgeSet {
        let e = self.num_edges();
        if e == MAX_EDGES {
            EdgeSet(u64::MAX)
        } else {
            EdgeSet((1u64 << e) - 1)
        }
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, w) = self.endpoints(e);
        u == w
    }

    pub fn valency(&self, v: usize) -> usize {
        self.ends.iter().filter(|&&x| x == v).count()
    }

    pub fn valencies(&self) -> Vec<usize> {
        let mut val = vec![0; self.num_vertices];
        for &v in &self.ends {
            val[v] += 1;
        }
        val
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn genus(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices
    }

    fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.num_vertices);
        for (u, w) in self.edges() {
            uf.union(u, w);
        }
        uf.components() == 1
    }

    /// Edges whose removal disconnects the graph (lowpoint search).
    pub fn bridges(&self) -> EdgeSet {
        let n = self.num_vertices;
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for h in 0..self.num_half_edges() {
            incident[self.ends[h]].push(h);
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut bridges = EdgeSet::EMPTY;
        let mut time = 0;
        // (vertex, edge used to enter it, next incident index)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        disc[0] = 0;
        low[0] = 0;
        stack.push((0, usize::MAX, 0));
        while let Some(top) = stack.last_mut() {
            let (v, via, idx) = *top;
            if idx < incident[v].len() {
                top.2 += 1;
                let h = incident[v][idx];
                let e = h / 2;
                if e == via {
                    continue;
                }
                let w = self.ends[h ^ 1];
                if disc[w] == usize::MAX {
                    time += 1;
                    disc[w] = time;
                    low[w] = time;
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        bridges.insert(via);
                    }
                }
            }
        }
        bridges
    }

    /// No bridges, and every valency-2 vertex carries a loop.
    pub fn is_stable(&self) -> bool {
        if !self.bridges().is_empty() {
            return false;
        }
        let val = self.valencies();
        (0..self.num_vertices).all(|v| val[v] != 2 || self.has_loop_at(v))
    }

    pub fn has_loop_at(&self, v: usize) -> bool {
        self.edges().any(|(a, b)| a == v && b == v)
    }

    pub fn is_forest(&self, s: EdgeSet) -> bool {
        let mut uf = UnionFind::new(self.num_vertices);
        for e in s.iter() {
            if e >= self.num_edges() {
                return false;
            }
            let (u, w) = self.endpoints(e);
            if !uf.union(u, w) {
                return false;
            }
        }
        true
    }

    /// Contracts a forest. Surviving edges keep their relative order.
    pub fn contract(&self, s: EdgeSet) -> Result<Contraction> {
        if !self.is_forest(s) {
            return Err(Error::NotAForest);
        }
        let mut uf = UnionFind::new(self.num_vertices);
        for e in s.iter() {
            let (u, w) = self.endpoints(e);
            uf.union(u, w);
        }
        let mut class_id = vec![usize::MAX; self.num_vertices];
        let mut vertex_map = vec![0; self.num_vertices];
        let mut next = 0;
        for v in 0..self.num_vertices {
            let r = uf.find(v);
            if class_id[r] == usize::MAX {
                class_id[r] = next;
                next += 1;
            }
            vertex_map[v] = class_id[r];
        }
        let mut edge_map = vec![None; self.num_edges()];
        let mut edges = Vec::new();
        for (e, (u, w)) in self.edges().enumerate() {
            if !s.contains(e) {
                edge_map[e] = Some(edges.len());
                edges.push((vertex_map[u], vertex_map[w]));
            }
        }
        let graph = MultiGraph::new_unchecked(next, &edges)?;
        Ok(Contraction {
            graph,
            vertex_map,
            edge_map,
        })
    }

    /// Same graph with vertices renamed by `perm` (old -> new) and edges
    /// reordered by `edge_perm` (old -> new); `flip[e]` swaps the halves.
    pub fn relabel(&self, perm: &[usize], edge_perm: &[usize], flip: &[bool]) -> MultiGraph {
        let mut ends = vec![0; self.ends.len()];
        for e in 0..self.num_edges() {
            let (u, w) = self.endpoints(e);
            let (u, w) = if flip[e] { (w, u) } else { (u, w) };
            let ne = edge_perm[e];
            ends[2 * ne] = perm[u];
            ends[2 * ne + 1] = perm[w];
        }
        MultiGraph {
            num_vertices: self.num_vertices,
            ends,
        }
    }

    /// Line-oriented text form: `v=<k>` then `e<i>: <u> <w>`.
    pub fn to_text(&self) -> String {
        let mut out = format!("v={}\n", self.num_vertices);
        for (i, (u, w)) in self.edges().enumerate() {
            out.push_str(&format!("e{i}: {u} {w}\n"));
        }
        out
    }
}

impl fmt::Display for MultiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for MultiGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let k = header
            .strip_prefix("v=")
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("expected `v=<k>`, got `{header}`")))?;
        let mut edges = Vec::new();
        for line in lines {
            let (label, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `e<i>: <u> <w>`, got `{line}`")))?;
            let idx = label
                .trim()
                .strip_prefix('e')
                .and_then(|i| i.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge label `{label}`")))?;
            if idx != edges.len() {
                return Err(Error::Parse(format!(
                    "edge labels must be consecutive, expected e{}, got e{idx}",
                    edges.len()
                )));
            }
            let ends: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex `{t}`"))))
                .collect::<Result<_>>()?;
            if ends.len() != 2 {
                return Err(Error::Parse(format!("edge e{idx} needs two endpoints")));
            }
            edges.push((ends[0], ends[1]));
        }
        MultiGraph::new(k, &edges)
    }
}

/// Result of contracting a forest: the quotient graph plus where vertices and
/// edges went. Contracted edges map to `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub graph: MultiGraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<Option<usize>>,
}

impl Contraction {
    /// Image of a half-edge of the original graph, if its edge survived.
    pub fn half_edge(&self, h: usize) -> Option<usize> {
        self.edge_map[h / 2].map(|e| 2 * e + (h & 1))
    }
}

/// A multigraph with an ordered set partition of its edges.
///
/// `blocks[e]` is the 0-based index of the block containing edge `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FilteredGraph {
    graph: MultiGraph,
    blocks: Vec<usize>,
    depth: usize,
}

impl FilteredGraph {
    /// Depth-one filtration `(E(G))`.
    pub fn trivial(graph: MultiGraph) -> Self {
        let blocks = vec![0; graph.num_edges()];
        FilteredGraph {
            graph,
            blocks,
            depth: 1,
        }
    }

    pub fn from_partition(graph: MultiGraph, partition: &[EdgeSet]) -> Result<Self> {
        if partition.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        let mut blocks = vec![usize::MAX; graph.num_edges()];
        for (i, b) in partition.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::InvalidPartition(format!("block {} is empty", i + 1)));
            }
            for e in b.iter() {
                if e >= graph.num_edges() {
                    return Err(Error::InvalidPartition(format!("edge {e} does not exist")));
                }
                if blocks[e] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("edge {e} appears twice")));
                }
                blocks[e] = i;
            }
        }
        if let Some(e) = blocks.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("edge {e} is not covered")));
        }
        Ok(FilteredGraph {
            graph,
            blocks,
            depth: partition.len(),
        })
    }

    /// From a per-edge block index vector; the used indices must be `0..m`.
    pub fn from_blocks(graph: MultiGraph, blocks: Vec<usize>) -> Result<Self> {
        if blocks.len() != graph.num_edges() {
            return Err(Error::InvalidPartition("block vector length differs from edge count".into()));
        }
        let depth = blocks.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; depth];
        for &b in &blocks {
            used[b] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(Error::InvalidPartition("some block is empty".into()));
        }
        Ok(FilteredGraph {
            graph,
            blocks,
            depth,
        })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn block_of(&self, e: usize) -> usize {
        self.blocks[e]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// The `i`-th block, 0-based.
    pub fn block(&self, i: usize) -> EdgeSet {
        self.blocks
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b == i)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn partition(&self) -> Vec<EdgeSet> {
        (0..self.depth).map(|i| self.block(i)).collect()
    }

    /// Union of all blocks but the last induces a forest.
    pub fn is_filtered_by_forests(&self) -> bool {
        let front: EdgeSet = self
            .blocks
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b + 1 < self.depth)
            .map(|(e, _)| e)
            .collect();
        self.graph.is_forest(front)
    }

    /// Contract the first block and drop it from the filtration.
    pub fn shrink_first(&self) -> Result<(FilteredGraph, Contraction)> {
        if self.depth < 2 {
            return Err(Error::InvalidPartition(
                "cannot shrink the only block of a depth-one filtration".into(),
            ));
        }
        let c = self.graph.contract(self.block(0))?;
        let mut blocks = vec![0; c.graph.num_edges()];
        for (e, img) in c.edge_map.iter().enumerate() {
            if let Some(ne) = img {
                blocks[*ne] = self.blocks[e] - 1;
            }
        }
        let fg = FilteredGraph {
            graph: c.graph.clone(),
            blocks,
            depth: self.depth - 1,
        };
        Ok((fg, c))
    }

    /// Merge blocks `i` and `i + 1` (0-based).
    pub fn merge(&self, i: usize) -> Result<FilteredGraph> {
        if i + 1 >= self.depth {
            return Err(Error::InvalidPartition(format!(
                "cannot merge block {i} with its successor in depth {}",
                self.depth
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|&b| if b > i { b - 1 } else { b })
            .collect();
        Ok(FilteredGraph {
            graph: self.graph.clone(),
            blocks,
            depth: self.depth - 1,
        })
    }
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    count: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            count: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.count -= 1;
        true
    }

    pub(crate) fn components(&self) -> usize {
        self.count
    }
}

/// Small named graphs used throughout tests and examples.
pub mod named {
    use super::MultiGraph;

    /// One vertex with `k` loops.
    pub fn bouquet(k: usize) -> MultiGraph {
        MultiGraph::new(1, &vec![(0, 0); k]).expect("bouquet")
    }

    /// Two vertices joined by `k` parallel edges.
    pub fn banana(k: usize) -> MultiGraph {
        MultiGraph::new(2, &vec![(0, 1); k]).expect("banana")
    }

    pub fn theta() -> MultiGraph {
        banana(3)
    }

    /// Two looped vertices joined by a bridge.
    pub fn dumbbell() -> MultiGraph {
        MultiGraph::new(2, &[(0, 0), (0, 1), (1, 1)]).expect("dumbbell")
    }

    pub fn k4() -> MultiGraph {
        MultiGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("k4")
    }

    /// A `k`-gon with `i` loops at its `i`-th vertex (1-based).
    pub fn polygon_with_loops(k: usize) -> MultiGraph {
        let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        for i in 0..k {
            edges.extend(std::iter::repeat_n((i, i), i + 1));
        }
        MultiGraph::new(k, &edges).expect("polygon with loops")
    }

    /// Triangle with one doubled side and `k - 1` loops at the opposite
    /// vertex; genus `k + 1`.
    pub fn looped_triangle(k: usize) -> MultiGraph {
        let mut edges = vec![(0, 1), (0, 1), (0, 2), (1, 2)];
        edges.extend(std::iter::repeat_n((2, 2), k - 1));
        MultiGraph::new(3, &edges).expect("looped triangle")
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn genus_examples() {
        assert_eq!(bouquet(1).genus(), 1);
        assert_eq!(theta().genus(), 2);
        assert_eq!(bouquet(2).genus(), 2);
    }

    #[test]
    fn bridge_examples() {
        assert_eq!(dumbbell().bridges(), EdgeSet::singleton(1));
        assert!(theta().bridges().is_empty());
        assert!(bouquet(1).bridges().is_empty());
        let path = MultiGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.bridges().len(), 2);
        let parallel_plus_pendant = MultiGraph::new(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(parallel_plus_pendant.bridges(), EdgeSet::singleton(2));
    }

    #[test]
    fn stability_examples() {
        assert!(bouquet(1).is_stable());
        assert!(!dumbbell().is_stable());
        assert!(theta().is_stable());
        // a 2-cycle has valency-2 vertices without loops
        assert!(!banana(2).is_stable());
    }

    #[test]
    fn forest_examples() {
        let t = theta();
        assert!(t.is_forest(EdgeSet::singleton(0)));
        assert!(!t.is_forest(EdgeSet::from_iter([0, 1])));
        assert!(t.is_forest(EdgeSet::EMPTY));
        assert!(!bouquet(2).is_forest(EdgeSet::singleton(0)));
    }

    #[test]
    fn contract_theta_edge() {
        let c = theta().contract(EdgeSet::singleton(0)).unwrap();
        assert_eq!(c.graph.num_vertices(), 1);
        assert_eq!(c.graph.num_edges(), 2);
        assert!(c.graph.is_loop(0) && c.graph.is_loop(1));
        assert_eq!(c.edge_map, vec![None, Some(0), Some(1)]);
        assert_eq!(c.half_edge(3), Some(1));
    }

    #[test]
    fn contract_empty_is_identity() {
        let t = k4();
        let c = t.contract(EdgeSet::EMPTY).unwrap();
        assert_eq!(c.graph, t);
    }

    #[test]
    fn contract_spanning_tree_of_k4() {
        let g = k4();
        let tree = EdgeSet::from_iter([0, 1, 2]);
        let c = g.contract(tree).unwrap();
        assert_eq!(c.graph.num_vertices(), 1);
        assert_eq!(c.graph.genus(), 3);
        assert!((0..3).all(|e| c.graph.is_loop(e)));
    }

    #[test]
    fn contract_rejects_cycle() {
        assert_eq!(theta().contract(EdgeSet::from_iter([0, 1])), Err(Error::NotAForest));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(MultiGraph::new(1, &[]), Err(Error::EmptyGraph));
        assert_eq!(MultiGraph::new(2, &[(0, 0)]), Err(Error::Disconnected));
        assert!(matches!(MultiGraph::new(2, &[(0, 5)]), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn text_roundtrip() {
        let g = polygon_with_loops(3);
        let back: MultiGraph = g.to_text().parse().unwrap();
        assert_eq!(back, g);
        assert!("v=2\ne0: 0 0\n".parse::<MultiGraph>().is_err());
        assert!("v=1\ne1: 0 0\n".parse::<MultiGraph>().is_err());
        assert!("w=1\n".parse::<MultiGraph>().is_err());
    }

    #[test]
    fn filtered_operations() {
        let fg = FilteredGraph::from_partition(
            theta(),
            &[EdgeSet::singleton(0), EdgeSet::from_iter([1, 2])],
        )
        .unwrap();
        assert!(fg.is_filtered_by_forests());
        let (h, _) = fg.shrink_first().unwrap();
        assert_eq!(h.depth(), 1);
        assert_eq!(h.graph().num_vertices(), 1);
        let m = fg.merge(0).unwrap();
        assert_eq!(m.depth(), 1);
        assert!(FilteredGraph::from_partition(theta(), &[EdgeSet::from_iter([0, 1])]).is_err());
        assert!(FilteredGraph::from_partition(
            theta(),
            &[EdgeSet::from_iter([0, 1]), EdgeSet::from_iter([1, 2])]
        )
        .is_err());
        let not_forest = FilteredGraph::from_partition(
            theta(),
            &[EdgeSet::from_iter([0, 1]), EdgeSet::singleton(2)],
        )
        .unwrap();
        assert!(!not_forest.is_filtered_by_forests());
    }
}
