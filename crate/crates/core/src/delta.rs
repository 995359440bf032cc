//! The generalized simplicial complex Δ_g, stored as a face poset.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::collapse::FacePoset;
use crate::enumerate::{filtered_structures, stable_graphs, FilteredClass};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, FilteredGraph, UnionFind};
use crate::iso::{self, CanonicalForm};
use crate::poly::CellPoly;
use crate::z2::{odd_entries, ChainComplexZ2};

/// A facet of a depth-`m` filtered graph: shrink the first block, or merge
/// blocks `i` and `i + 1` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FacetKind {
    Shrink,
    Merge(usize),
}

impl FacetKind {
    /// Position among the facets; facet `k` omits the `k`-th vertex.
    pub fn slot(self) -> usize {
        match self {
            FacetKind::Shrink => 0,
            FacetKind::Merge(i) => i + 1,
        }
    }

    pub fn from_slot(k: usize) -> FacetKind {
        match k {
            0 => FacetKind::Shrink,
            k => FacetKind::Merge(k - 1),
        }
    }

    /// All facet kinds of a cell of the given depth, in slot order.
    pub fn all(depth: usize) -> Vec<FacetKind> {
        if depth < 2 {
            return Vec::new();
        }
        (0..depth).map(FacetKind::from_slot).collect()
    }
}

/// A facet together with the graph map onto the canonical representative
/// of its class.
#[derive(Clone, Debug)]
pub struct FacetMap {
    pub kind: FacetKind,
    pub form: CanonicalForm,
    pub graph: FilteredGraph,
    pub vertex_map: Vec<usize>,
    /// `None` for half-edges of shrunk edges.
    pub half_edge_map: Vec<Option<usize>>,
}

pub fn facet_map(fg: &FilteredGraph, kind: FacetKind) -> Result<FacetMap> {
    if fg.depth() < 2 || kind.slot() >= fg.depth() {
        return Err(Error::InvalidPartition(format!(
            "no facet {kind:?} on a filtration of depth {}",
            fg.depth()
        )));
    }
    let g = fg.graph();
    let (facet, vertex_map, half_edge_map): (FilteredGraph, Vec<usize>, Vec<Option<usize>>) = match kind {
        FacetKind::Shrink => {
            let (h, c) = fg.shrink_first()?;
            let hm = (0..g.num_half_edges()).map(|x| c.half_edge(x)).collect();
            (h, c.vertex_map.clone(), hm)
        }
        FacetKind::Merge(i) => (
            fg.merge(i)?,
            (0..g.num_vertices()).collect(),
            (0..g.num_half_edges()).map(Some).collect(),
        ),
    };
    let c = iso::canonical(&facet);
    Ok(FacetMap {
        kind,
        form: c.form,
        vertex_map: vertex_map.iter().map(|&v| c.to_canonical.vertex(v)).collect(),
        half_edge_map: half_edge_map
            .iter()
            .map(|h| h.map(|x| c.to_canonical.half_edge(x)))
            .collect(),
        graph: c.graph,
    })
}

#[derive(Clone, Debug)]
pub struct Facet {
    pub kind: FacetKind,
    pub target: usize,
    pub vertex_map: Vec<usize>,
    pub half_edge_map: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct DeltaComplex {
    genus: usize,
    cells: Vec<FilteredClass>,
    facets: Vec<Vec<Facet>>,
    index: HashMap<CanonicalForm, usize>,
}

impl DeltaComplex {
    pub fn build(genus: usize) -> Result<DeltaComplex> {
        let classes = stable_graphs(genus)?;
        let mut cells: Vec<FilteredClass> = classes.par_iter().flat_map_iter(filtered_structures).collect();
        cells.sort_by(|a, b| (a.depth, &a.form).cmp(&(b.depth, &b.form)));
        let index: HashMap<CanonicalForm, usize> =
            cells.iter().enumerate().map(|(i, c)| (c.form.clone(), i)).collect();
        let facets = cells
            .par_iter()
            .map(|cell| {
                FacetKind::all(cell.depth)
                    .into_iter()
                    .map(|kind| {
                        let m = facet_map(&cell.graph, kind)?;
                        let target = *index.get(&m.form).ok_or_else(|| {
                            Error::Consistency(format!("facet {kind:?} of {} is not a cell", cell.form))
                        })?;
                        Ok(Facet {
                            kind,
                            target,
                            vertex_map: m.vertex_map,
                            half_edge_map: m.half_edge_map,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DeltaComplex {
            genus,
            cells,
            facets,
            index,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn cells(&self) -> &[FilteredClass] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &FilteredClass {
        &self.cells[i]
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn dim_of(&self, i: usize) -> usize {
        self.cells[i].dim()
    }

    pub fn facets(&self, i: usize) -> &[Facet] {
        &self.facets[i]
    }

    pub fn index_of(&self, form: &CanonicalForm) -> Option<usize> {
        self.index.get(form).copied()
    }

    /// Number of cells in each dimension.
    pub fn counts(&self) -> CellPoly {
        crate::fiber::counts_by_dim(self.cells.iter().map(FilteredClass::dim))
    }

    pub fn dimension(&self) -> usize {
        self.cells.iter().map(FilteredClass::dim).max().unwrap_or(0)
    }

    /// Top dimension, and whether every maximal cell has it.
    pub fn dimension_and_purity(&self) -> (usize, bool) {
        let top = self.dimension();
        let mut has_coface = vec![false; self.cells.len()];
        for fs in &self.facets {
            for f in fs {
                has_coface[f.target] = true;
            }
        }
        let pure = (0..self.cells.len()).all(|i| has_coface[i] || self.dim_of(i) == top);
        (top, pure)
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.cells.len());
        let mut vertices = 0;
        for (i, fs) in self.facets.iter().enumerate() {
            match self.dim_of(i) {
                0 => vertices += 1,
                1 => {
                    uf.union(fs[0].target, fs[1].target);
                }
                _ => {}
            }
        }
        let roots: BTreeSet<usize> = (0..self.cells.len())
            .filter(|&i| self.dim_of(i) == 0)
            .map(|i| uf.find(i))
            .collect();
        vertices > 0 && roots.len() == 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().euler()
    }

    /// The vertex cells of cell `i`, in order, read off through facets.
    pub fn vertices(&self, i: usize) -> Vec<usize> {
        let m = self.dim_of(i);
        (0..=m)
            .map(|k| {
                let (mut cur, mut pos) = (i, k);
                while self.dim_of(cur) > 0 {
                    let d = self.dim_of(cur);
                    if pos < d {
                        cur = self.facets[cur][d].target;
                    } else {
                        cur = self.facets[cur][0].target;
                        pos -= 1;
                    }
                }
                cur
            })
            .collect()
    }

    /// Checks that the vertices of every simplex are the graphs obtained by
    /// contracting successive prefixes of the filtration.
    pub fn check_simplex_vertices(&self) -> Result<()> {
        for i in 0..self.cells.len() {
            let fg = &self.cells[i].graph;
            let mut prefix = EdgeSet::EMPTY;
            let via_facets = self.vertices(i);
            for (k, &v) in via_facets.iter().enumerate() {
                let c = fg.graph().contract(prefix)?;
                let form = iso::canonical(&FilteredGraph::trivial(c.graph)).form;
                if self.index_of(&form) != Some(v) {
                    return Err(Error::Consistency(format!("vertex {k} of cell {i} disagrees with its facets")));
                }
                if k + 1 < via_facets.len() {
                    prefix = prefix.union(fg.block(k));
                }
            }
        }
        Ok(())
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for `i < j` on every cell.
    pub fn check_facet_identities(&self) -> Result<()> {
        for c in 0..self.cells.len() {
            let m = self.dim_of(c);
            if m < 2 {
                continue;
            }
            for j in 1..=m {
                for i in 0..j {
                    let a = self.facets[self.facets[c][j].target][i].target;
                    let b = self.facets[self.facets[c][i].target][j - 1].target;
                    if a != b {
                        return Err(Error::Consistency(format!(
                            "facet identity fails on cell {c} for slots {i} < {j}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-verifies that every cell is stable and filtered by forests, with
    /// non-empty blocks.
    pub fn check_forest_condition(&self) -> Result<()> {
        for (i, c) in self.cells.iter().enumerate() {
            let fg = &c.graph;
            let ok = fg.graph().is_stable()
                && fg.graph().genus() == self.genus
                && fg.is_filtered_by_forests()
                && (0..fg.depth()).all(|b| !fg.block(b).is_empty());
            if !ok {
                return Err(Error::Consistency(format!("cell {i} is not a filtered-by-forests stable graph")));
            }
        }
        Ok(())
    }

    /// Number of distinct top-dimensional cells having `v` as a vertex.
    pub fn top_cells_containing(&self, v: usize) -> usize {
        let top = self.dimension();
        (0..self.cells.len())
            .filter(|&i| self.dim_of(i) == top && self.vertices(i).contains(&v))
            .count()
    }

    pub fn face_poset(&self) -> FacePoset {
        let dims = (0..self.cells.len()).map(|i| self.dim_of(i)).collect();
        let facets = self
            .facets
            .iter()
            .map(|fs| {
                let mut m: Vec<(usize, u32)> = Vec::new();
                for f in fs {
                    match m.iter_mut().find(|(t, _)| *t == f.target) {
                        Some(e) => e.1 += 1,
                        None => m.push((f.target, 1)),
                    }
                }
                m
            })
            .collect();
        FacePoset::new(dims, facets, vec![Vec::new(); self.cells.len()])
    }

    pub fn chain_complex(&self) -> ChainComplexZ2 {
        let top = self.dimension();
        let mut local = vec![0u32; self.cells.len()];
        let mut boundary: Vec<Vec<Vec<u32>>> = vec![Vec::new(); top + 1];
        for i in 0..self.cells.len() {
            let d = self.dim_of(i);
            local[i] = boundary[d].len() as u32;
            let faces = if d == 0 {
                Vec::new()
            } else {
                odd_entries(self.facets[i].iter().map(|f| local[f.target]).collect())
            };
            boundary[d].push(faces);
        }
        ChainComplexZ2::new(boundary)
    }

    /// Graphviz rendering of the 1-skeleton.
    pub fn to_dot(&self) -> String {
        let mut s = format!("graph delta_{} {{\n", self.genus);
        for i in 0..self.cells.len() {
            if self.dim_of(i) == 0 {
                let g = self.cells[i].graph.graph();
                let _ = writeln!(
                    s,
                    "  c{i} [label=\"v={} e={}\", tooltip=\"{}\"];",
                    g.num_vertices(),
                    g.num_edges(),
                    self.cells[i].form
                );
            }
        }
        for i in 0..self.cells.len() {
            if self.dim_of(i) == 1 {
                let _ = writeln!(s, "  c{} -- c{};", self.facets[i][0].target, self.facets[i][1].target);
            }
        }
        s.push_str("}\n");
        s
    }
}
