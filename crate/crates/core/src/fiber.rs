//! The subdivided graph S(G,π), quotient cubical complexes
//! C(G,π) = S(G,π)^n / Aut(G,π), and the maps between them.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::delta::{facet_map, FacetKind};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, FilteredGraph, MultiGraph};
use crate::iso::{self, AutGroup, Automorphism};
use crate::poly::CellPoly;
use crate::z2::{odd_entries, ChainComplexZ2};

/// Cell ids are small: vertices, then midpoints, then 1-cells.
pub type CellId = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CellKind {
    Vertex(usize),
    /// Midpoint of a subdivided edge.
    Midpoint(usize),
    /// An edge that is not subdivided.
    Edge(usize),
    /// The half of a subdivided edge running from its vertex to the midpoint.
    Half(usize),
}

#[derive(Clone, Debug)]
pub struct SubdividedGraph {
    base: FilteredGraph,
    group: AutGroup,
    subdivided: EdgeSet,
    kinds: Vec<CellKind>,
    ends: Vec<Option<(CellId, CellId)>>,
    vertex_cell: Vec<CellId>,
    midpoint_cell: Vec<Option<CellId>>,
    edge_cell: Vec<Option<CellId>>,
    half_cell: Vec<Option<CellId>>,
    /// One cell permutation per group element, in group order.
    perms: Vec<Vec<CellId>>,
}

impl SubdividedGraph {
    pub fn new(base: &FilteredGraph) -> Self {
        Self::with_group(base.clone(), iso::automorphisms(base))
    }

    /// `group` must be the full automorphism group of `base`.
    pub fn with_group(base: FilteredGraph, group: AutGroup) -> Self {
        let g = base.graph();
        let subdivided: EdgeSet = (0..g.num_edges())
            .filter(|&e| g.is_loop(e) || group.iter().any(|a| a.flips(e)))
            .collect();
        let mut kinds = Vec::new();
        let mut vertex_cell = Vec::new();
        for v in 0..g.num_vertices() {
            vertex_cell.push(kinds.len() as CellId);
            kinds.push(CellKind::Vertex(v));
        }
        let mut midpoint_cell = vec![None; g.num_edges()];
        for e in subdivided.iter() {
            midpoint_cell[e] = Some(kinds.len() as CellId);
            kinds.push(CellKind::Midpoint(e));
        }
        let mut edge_cell = vec![None; g.num_edges()];
        let mut half_cell = vec![None; g.num_half_edges()];
        for e in 0..g.num_edges() {
            if subdivided.contains(e) {
                for h in MultiGraph::half_edges(e) {
                    half_cell[h] = Some(kinds.len() as CellId);
                    kinds.push(CellKind::Half(h));
                }
            } else {
                edge_cell[e] = Some(kinds.len() as CellId);
                kinds.push(CellKind::Edge(e));
            }
        }
        assert!(kinds.len() <= CellId::MAX as usize, "subdivided graph too large");
        let ends = kinds
            .iter()
            .map(|k| match *k {
                CellKind::Vertex(_) | CellKind::Midpoint(_) => None,
                CellKind::Edge(e) => {
                    let (u, w) = g.endpoints(e);
                    Some((vertex_cell[u], vertex_cell[w]))
                }
                CellKind::Half(h) => Some((
                    vertex_cell[g.vertex_of(h)],
                    midpoint_cell[MultiGraph::edge_of(h)].expect("half of a subdivided edge"),
                )),
            })
            .collect();
        let mut s = SubdividedGraph {
            base,
            group,
            subdivided,
            kinds,
            ends,
            vertex_cell,
            midpoint_cell,
            edge_cell,
            half_cell,
            perms: Vec::new(),
        };
        s.perms = s.group.iter().map(|a| s.cell_perm(a)).collect();
        s
    }

    pub fn base(&self) -> &FilteredGraph {
        &self.base
    }

    pub fn group(&self) -> &AutGroup {
        &self.group
    }

    pub fn subdivided(&self) -> EdgeSet {
        self.subdivided
    }

    pub fn num_cells(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, c: CellId) -> CellKind {
        self.kinds[c as usize]
    }

    pub fn dim(&self, c: CellId) -> usize {
        usize::from(self.ends[c as usize].is_some())
    }

    /// Endpoints of a 1-cell.
    pub fn endpoints(&self, c: CellId) -> Option<(CellId, CellId)> {
        self.ends[c as usize]
    }

    pub fn vertex_cell(&self, v: usize) -> CellId {
        self.vertex_cell[v]
    }

    pub fn midpoint_cell(&self, e: usize) -> Option<CellId> {
        self.midpoint_cell[e]
    }

    pub fn edge_cell(&self, e: usize) -> Option<CellId> {
        self.edge_cell[e]
    }

    pub fn half_cell(&self, h: usize) -> Option<CellId> {
        self.half_cell[h]
    }

    pub fn perms(&self) -> &[Vec<CellId>] {
        &self.perms
    }

    /// The permutation of cells induced by an automorphism of the base.
    pub fn cell_perm(&self, a: &Automorphism) -> Vec<CellId> {
        self.kinds
            .iter()
            .map(|k| match *k {
                CellKind::Vertex(v) => self.vertex_cell[a.vertex(v)],
                CellKind::Midpoint(e) => self.midpoint_cell[a.edge(e)].expect("flipped edges form an orbit"),
                CellKind::Edge(e) => self.edge_cell[a.edge(e)].expect("flipped edges form an orbit"),
                CellKind::Half(h) => self.half_cell[a.half_edge(h)].expect("flipped edges form an orbit"),
            })
            .collect()
    }

    /// P(S(G,π)).
    pub fn poly(&self) -> CellPoly {
        let ones = self.ends.iter().filter(|e| e.is_some()).count() as i64;
        CellPoly::new(vec![self.kinds.len() as i64 - ones, ones])
    }

    /// P of the subcomplex fixed pointwise by `a`. A 1-cell counts only if
    /// both of its endpoints stay where they are.
    pub fn fixed_poly(&self, a: &Automorphism) -> CellPoly {
        fixed_poly_of(self, &self.cell_perm(a))
    }

    /// P(C(G,π)) for `n` marks by the weighted Burnside lemma.
    pub fn fiber_poly(&self, n: u32) -> Result<CellPoly> {
        let mut by_fix: HashMap<CellPoly, i64> = HashMap::new();
        for p in &self.perms {
            *by_fix.entry(fixed_poly_of(self, p)).or_default() += 1;
        }
        let mut sum = CellPoly::zero();
        for (fix, count) in by_fix {
            sum = sum.add(&fix.pow(n)?.scale(count)?)?;
        }
        sum.div_exact(self.group.order())
    }

    /// Lexicographically smallest image of `t` under the diagonal action.
    pub fn canonical_tuple(&self, t: &[CellId]) -> Vec<CellId> {
        let mut best = t.to_vec();
        let mut img = vec![0; t.len()];
        for p in &self.perms {
            for (i, &c) in t.iter().enumerate() {
                img[i] = p[c as usize];
            }
            if img < best {
                best.clone_from(&img);
            }
        }
        best
    }

    fn prefix_is_minimal(&self, t: &[CellId]) -> bool {
        self.perms.iter().all(|p| {
            for &c in t {
                let m = p[c as usize];
                if m != c {
                    return m > c;
                }
            }
            true
        })
    }

    pub fn tuple_dim(&self, t: &[CellId]) -> usize {
        t.iter().map(|&c| self.dim(c)).sum()
    }

    /// Orbit representatives of `S(G,π)^n`, in increasing lexicographic order.
    pub fn cube_orbits(&self, n: usize) -> Vec<CubeOrbit> {
        if n == 0 {
            return vec![CubeOrbit { cells: Vec::new(), dim: 0 }];
        }
        let nc = self.num_cells() as CellId;
        (0..nc)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut out = Vec::new();
                let mut t = vec![first];
                self.extend_minimal(&mut t, n, &mut out);
                out
            })
            .collect()
    }

    fn extend_minimal(&self, t: &mut Vec<CellId>, n: usize, out: &mut Vec<CubeOrbit>) {
        if !self.prefix_is_minimal(t) {
            return;
        }
        if t.len() == n {
            out.push(CubeOrbit {
                dim: self.tuple_dim(t),
                cells: t.clone(),
            });
            return;
        }
        for c in 0..self.num_cells() as CellId {
            t.push(c);
            self.extend_minimal(t, n, out);
            t.pop();
        }
    }

    /// Per-dimension number of orbits, by listing them.
    pub fn orbit_counts(&self, n: usize) -> CellPoly {
        counts_by_dim(self.cube_orbits(n).iter().map(|o| o.dim))
    }

    /// Every element stabilizing `t` as a tuple also fixes each of its
    /// cells pointwise.
    pub fn stabilizer_fixes_pointwise(&self, t: &[CellId]) -> bool {
        self.perms.iter().all(|p| {
            let stabilizes = t.iter().all(|&c| p[c as usize] == c);
            !stabilizes
                || t.iter().all(|&c| match self.ends[c as usize] {
                    None => true,
                    Some((a, b)) => p[a as usize] == a && p[b as usize] == b,
                })
        })
    }

    /// The `2·dim` codimension-one faces of the cube `t`, not canonicalized.
    pub fn cube_faces(&self, t: &[CellId]) -> Vec<Vec<CellId>> {
        let mut out = Vec::new();
        for (i, &c) in t.iter().enumerate() {
            if let Some((a, b)) = self.ends[c as usize] {
                for x in [a, b] {
                    let mut f = t.to_vec();
                    f[i] = x;
                    out.push(f);
                }
            }
        }
        out
    }

    /// The cubical chain complex of C(G,π) alone.
    pub fn chain_complex(&self, n: usize) -> Result<ChainComplexZ2> {
        let orbits = self.cube_orbits(n);
        let top = orbits.iter().map(|o| o.dim).max().unwrap_or(0);
        let mut index: HashMap<&[CellId], (usize, u32)> = HashMap::new();
        let mut counts = vec![0u32; top + 1];
        for o in &orbits {
            index.insert(&o.cells, (o.dim, counts[o.dim]));
            counts[o.dim] += 1;
        }
        let mut boundary: Vec<Vec<Vec<u32>>> = counts.iter().map(|&c| Vec::with_capacity(c as usize)).collect();
        for o in &orbits {
            let faces = self
                .cube_faces(&o.cells)
                .into_iter()
                .map(|f| {
                    let key = self.canonical_tuple(&f);
                    index
                        .get(key.as_slice())
                        .map(|&(_, i)| i)
                        .ok_or_else(|| Error::Consistency(format!("face {key:?} is not an orbit representative")))
                })
                .collect::<Result<Vec<_>>>()?;
            boundary[o.dim].push(odd_entries(faces));
        }
        let c = ChainComplexZ2::new(boundary);
        c.check_square_zero()?;
        Ok(c)
    }
}

fn fixed_poly_of(s: &SubdividedGraph, p: &[CellId]) -> CellPoly {
    let mut zero = 0;
    let mut one = 0;
    for c in 0..p.len() {
        if p[c] as usize != c {
            continue;
        }
        match s.ends[c] {
            None => zero += 1,
            Some((a, b)) if p[a as usize] == a && p[b as usize] == b => one += 1,
            Some(_) => {}
        }
    }
    CellPoly::new(vec![zero, one])
}

pub(crate) fn counts_by_dim(dims: impl Iterator<Item = usize>) -> CellPoly {
    let mut v: Vec<i64> = Vec::new();
    for d in dims {
        if v.len() <= d {
            v.resize(d + 1, 0);
        }
        v[d] += 1;
    }
    CellPoly::new(v)
}

/// A cube of `S(G,π)^n`, given by its orbit-minimal tuple of cells.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CubeOrbit {
    pub cells: Vec<CellId>,
    pub dim: usize,
}

/// Image of a cube under a structure map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitImage {
    /// Some 1-cell coordinate collapsed to a point. Lists the (canonical)
    /// lower-dimensional cubes covered by the image.
    Degenerate(Vec<Vec<CellId>>),
    /// Canonical target cubes of the same dimension, with repetition.
    Cubes(Vec<Vec<CellId>>),
}

/// A cellular map between subdivided graphs induced by a graph map
/// (contraction or isomorphism, given on vertices and half-edges).
pub struct CellMap<'a> {
    pub src: &'a SubdividedGraph,
    pub dst: &'a SubdividedGraph,
    pub vertex_map: &'a [usize],
    pub half_edge_map: &'a [Option<usize>],
}

impl CellMap<'_> {
    fn subdivided_target(&self, e: usize) -> Result<(CellId, [CellId; 2])> {
        let dst = self.dst;
        match dst.midpoint_cell(e) {
            Some(m) => Ok((m, [dst.half_cell(2 * e).unwrap(), dst.half_cell(2 * e + 1).unwrap()])),
            None => Err(Error::Consistency(format!(
                "subdivided edge maps onto edge {e}, which is not subdivided"
            ))),
        }
    }

    /// Cells of the target covered by the image of `c`. A 1-cell whose image
    /// is a single 0-cell has dropped dimension.
    pub fn image(&self, c: CellId) -> Result<Vec<CellId>> {
        let src = self.src;
        let g = src.base().graph();
        let point = |v: usize| self.dst.vertex_cell(self.vertex_map[v]);
        Ok(match src.kind(c) {
            CellKind::Vertex(v) => vec![point(v)],
            CellKind::Midpoint(e) => match self.half_edge_map[2 * e] {
                None => vec![point(g.vertex_of(2 * e))],
                Some(h) => vec![self.subdivided_target(h / 2)?.0],
            },
            CellKind::Half(h) => match self.half_edge_map[h] {
                None => vec![point(g.vertex_of(h))],
                Some(t) => {
                    self.subdivided_target(t / 2)?;
                    vec![self.dst.half_cell(t).unwrap()]
                }
            },
            CellKind::Edge(e) => match self.half_edge_map[2 * e] {
                None => vec![point(g.vertex_of(2 * e))],
                Some(t) => match self.dst.edge_cell(t / 2) {
                    Some(cell) => vec![cell],
                    None => self.subdivided_target(t / 2)?.1.to_vec(),
                },
            },
        })
    }

    /// Image of the cube `t` in the quotient of the target.
    pub fn map_cube(&self, t: &[CellId]) -> Result<OrbitImage> {
        let mut choices = Vec::with_capacity(t.len());
        let mut degenerate = false;
        for &c in t {
            let img = self.image(c)?;
            if self.src.dim(c) == 1 && self.dst.dim(img[0]) == 0 {
                degenerate = true;
            }
            choices.push(img);
        }
        let mut cubes = Vec::new();
        let mut cur = Vec::with_capacity(t.len());
        product(&choices, &mut cur, &mut |x| cubes.push(self.dst.canonical_tuple(x)));
        Ok(if degenerate {
            cubes.sort();
            cubes.dedup();
            OrbitImage::Degenerate(cubes)
        } else {
            OrbitImage::Cubes(cubes)
        })
    }
}

fn product(choices: &[Vec<CellId>], cur: &mut Vec<CellId>, f: &mut impl FnMut(&[CellId])) {
    if cur.len() == choices.len() {
        f(cur);
        return;
    }
    for &c in &choices[cur.len()] {
        cur.push(c);
        product(choices, cur, f);
        cur.pop();
    }
}

/// The quotient map of fibers attached to one facet of a filtered graph,
/// tabulated on every cube orbit of the source.
#[derive(Clone, Debug)]
pub struct StructureMap {
    pub kind: FacetKind,
    pub source: SubdividedGraph,
    pub target: SubdividedGraph,
    pub images: Vec<(CubeOrbit, OrbitImage)>,
}

/// Tabulates the structure map for facet `kind` of `fg` on `n` marks. The
/// target is the canonical representative of the facet class.
pub fn structure_map(fg: &FilteredGraph, kind: FacetKind, n: usize) -> Result<StructureMap> {
    let facet = facet_map(fg, kind)?;
    let source = SubdividedGraph::new(fg);
    let target = SubdividedGraph::new(&facet.graph);
    let map = CellMap {
        src: &source,
        dst: &target,
        vertex_map: &facet.vertex_map,
        half_edge_map: &facet.half_edge_map,
    };
    let images = source
        .cube_orbits(n)
        .into_iter()
        .map(|o| {
            let img = map.map_cube(&o.cells)?;
            Ok((o, img))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StructureMap {
        kind,
        source,
        target,
        images,
    })
}

/// Shorthand for `SubdividedGraph::new(fg).fiber_poly(n)`.
pub fn fiber_poly(fg: &FilteredGraph, n: u32) -> Result<CellPoly> {
    SubdividedGraph::new(fg).fiber_poly(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn theta_mid_first() -> FilteredGraph {
        FilteredGraph::from_blocks(theta(), vec![0, 1, 1]).unwrap()
    }

    #[test]
    fn subdivision_sizes() {
        let s = SubdividedGraph::new(&FilteredGraph::trivial(bouquet(1)));
        assert_eq!(s.poly(), CellPoly::new(vec![2, 2]));
        let s = SubdividedGraph::new(&FilteredGraph::trivial(theta()));
        assert_eq!(s.poly(), CellPoly::new(vec![5, 6]));
        let s = SubdividedGraph::new(&FilteredGraph::trivial(bouquet(2)));
        assert_eq!(s.poly(), CellPoly::new(vec![3, 4]));
    }

    #[test]
    fn fixed_polys() {
        let s = SubdividedGraph::new(&FilteredGraph::trivial(bouquet(1)));
        let polys: Vec<_> = s.group().iter().map(|a| s.fixed_poly(a)).collect();
        assert_eq!(polys, vec![CellPoly::new(vec![2, 2]), CellPoly::new(vec![2])]);
    }

    #[test]
    fn genus_two_fibers() {
        let a = fiber_poly(&FilteredGraph::trivial(bouquet(2)), 2).unwrap();
        let b = fiber_poly(&FilteredGraph::trivial(theta()), 2).unwrap();
        let c = fiber_poly(&theta_mid_first(), 2).unwrap();
        assert_eq!(a, CellPoly::new(vec![5, 6, 3]));
        assert_eq!(b, CellPoly::new(vec![6, 8, 4]));
        assert_eq!(c, CellPoly::new(vec![11, 18, 10]));
    }

    #[test]
    fn burnside_matches_orbits() {
        for fg in [
            FilteredGraph::trivial(bouquet(2)),
            FilteredGraph::trivial(theta()),
            theta_mid_first(),
        ] {
            let s = SubdividedGraph::new(&fg);
            for n in 0..4 {
                assert_eq!(s.fiber_poly(n).unwrap(), s.orbit_counts(n as usize));
            }
        }
    }

    #[test]
    fn fiber_homology() {
        let betti = |fg: FilteredGraph| SubdividedGraph::new(&fg).chain_complex(2).unwrap().betti();
        assert_eq!(betti(FilteredGraph::trivial(bouquet(2))), vec![1, 0, 1]);
        assert_eq!(betti(FilteredGraph::trivial(theta())), vec![1, 0, 1]);
        assert_eq!(betti(theta_mid_first()), vec![1, 0, 2]);
    }

    #[test]
    fn shrink_drops_middle_coordinates() {
        let m = structure_map(&theta_mid_first(), FacetKind::Shrink, 2).unwrap();
        let mid_halves: Vec<CellId> = [0usize, 1].iter().map(|&h| m.source.half_cell(h).unwrap()).collect();
        for (orbit, img) in &m.images {
            if orbit.dim != 2 {
                continue;
            }
            let touches_mid = orbit.cells.iter().any(|c| mid_halves.contains(c));
            assert_eq!(touches_mid, matches!(img, OrbitImage::Degenerate(_)));
        }
    }
}
