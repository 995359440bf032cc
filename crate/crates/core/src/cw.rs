//! The CW complex X_{g,n}: cells are pairs (simplex of Δ_g, cube orbit of
//! the fiber over it).

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::collapse::FacePoset;
use crate::delta::{DeltaComplex, FacetKind};
use crate::error::{Error, Result};
use crate::fiber::{CellId, CellMap, CubeOrbit, OrbitImage, SubdividedGraph};
use crate::poly::CellPoly;
use crate::z2::{odd_entries, ChainComplexZ2};

struct Fiber {
    s: SubdividedGraph,
    orbits: Vec<CubeOrbit>,
    index: HashMap<Vec<CellId>, usize>,
}

impl Fiber {
    fn lookup(&self, t: &[CellId]) -> Result<usize> {
        self.index
            .get(t)
            .copied()
            .ok_or_else(|| Error::Consistency(format!("cube {t:?} is not an orbit representative")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CwCell {
    pub simplex: usize,
    /// Position among the cube orbits of the fiber over `simplex`.
    pub cube: usize,
    pub dim: usize,
}

pub struct CwComplex {
    genus: usize,
    marks: usize,
    delta: DeltaComplex,
    fibers: Vec<Fiber>,
    cells: Vec<CwCell>,
    /// Faces one dimension down, with the number of times each is covered.
    boundary: Vec<Vec<(usize, u32)>>,
    /// Lower-dimensional cells met by degenerate gluings.
    touches: Vec<Vec<usize>>,
    merge_drops: usize,
    chain: ChainComplexZ2,
    local: Vec<u32>,
}

impl CwComplex {
    /// Builds the complex and checks that ∂∘∂ = 0 and that the cell counts
    /// agree with the Burnside count.
    pub fn build(genus: usize, marks: usize) -> Result<CwComplex> {
        Self::from_delta(DeltaComplex::build(genus)?, marks)
    }

    pub fn from_delta(delta: DeltaComplex, marks: usize) -> Result<CwComplex> {
        let fibers: Vec<Fiber> = delta
            .cells()
            .par_iter()
            .map(|c| {
                let s = SubdividedGraph::with_group(c.graph.clone(), c.aut.clone());
                let orbits = s.cube_orbits(marks);
                let index = orbits.iter().enumerate().map(|(i, o)| (o.cells.clone(), i)).collect();
                Fiber { s, orbits, index }
            })
            .collect();
        let mut offset = Vec::with_capacity(fibers.len());
        let mut cells = Vec::new();
        for (sigma, f) in fibers.iter().enumerate() {
            offset.push(cells.len());
            for (cube, o) in f.orbits.iter().enumerate() {
                cells.push(CwCell {
                    simplex: sigma,
                    cube,
                    dim: delta.dim_of(sigma) + o.dim,
                });
            }
        }

        type Attach = (Vec<(usize, u32)>, Vec<usize>, usize);
        let attach: Vec<Attach> = cells
            .par_iter()
            .map(|cell| -> Result<Attach> {
                let fib = &fibers[cell.simplex];
                let t = &fib.orbits[cell.cube].cells;
                let mut faces: BTreeMap<usize, u32> = BTreeMap::new();
                let mut touches = Vec::new();
                let mut drops = 0;
                for f in fib.s.cube_faces(t) {
                    let local = fib.lookup(&fib.s.canonical_tuple(&f))?;
                    *faces.entry(offset[cell.simplex] + local).or_default() += 1;
                }
                for facet in delta.facets(cell.simplex) {
                    let dst = &fibers[facet.target];
                    let map = CellMap {
                        src: &fib.s,
                        dst: &dst.s,
                        vertex_map: &facet.vertex_map,
                        half_edge_map: &facet.half_edge_map,
                    };
                    match map.map_cube(t)? {
                        OrbitImage::Cubes(cubes) => {
                            for c in cubes {
                                *faces.entry(offset[facet.target] + dst.lookup(&c)?).or_default() += 1;
                            }
                        }
                        OrbitImage::Degenerate(cubes) => {
                            if facet.kind != FacetKind::Shrink {
                                drops += 1;
                            }
                            for c in cubes {
                                touches.push(offset[facet.target] + dst.lookup(&c)?);
                            }
                        }
                    }
                }
                touches.sort_unstable();
                touches.dedup();
                Ok((faces.into_iter().collect(), touches, drops))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut boundary = Vec::with_capacity(cells.len());
        let mut touches = Vec::with_capacity(cells.len());
        let mut merge_drops = 0;
        for (b, t, d) in attach {
            boundary.push(b);
            touches.push(t);
            merge_drops += d;
        }

        let top = cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut local = vec![0u32; cells.len()];
        let mut per_dim = vec![0u32; top + 1];
        for (i, c) in cells.iter().enumerate() {
            local[i] = per_dim[c.dim];
            per_dim[c.dim] += 1;
        }
        let mut columns: Vec<Vec<Vec<u32>>> = per_dim.iter().map(|&k| Vec::with_capacity(k as usize)).collect();
        for (i, c) in cells.iter().enumerate() {
            let mut entries = Vec::new();
            for &(f, m) in &boundary[i] {
                if cells[f].dim + 1 != c.dim {
                    return Err(Error::Consistency(format!("cell {i} has a facet of the wrong dimension")));
                }
                if m % 2 == 1 {
                    entries.push(local[f]);
                }
            }
            columns[c.dim].push(odd_entries(entries));
        }
        let chain = ChainComplexZ2::new(columns);
        chain.check_square_zero()?;

        let cw = CwComplex {
            genus: delta.genus(),
            marks,
            delta,
            fibers,
            cells,
            boundary,
            touches,
            merge_drops,
            chain,
            local,
        };
        let expected = total_poly(&cw.delta, marks as u32)?;
        let counts = cw.counts();
        for d in 0..=top.max(expected.degree().unwrap_or(0)) {
            if expected.coeff(d) != counts.coeff(d) {
                return Err(Error::CountMismatch {
                    dim: d,
                    left: counts.coeff(d),
                    right: expected.coeff(d),
                });
            }
        }
        Ok(cw)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn marks(&self) -> usize {
        self.marks
    }

    pub fn delta(&self) -> &DeltaComplex {
        &self.delta
    }

    pub fn cells(&self) -> &[CwCell] {
        &self.cells
    }

    pub fn cube(&self, cell: usize) -> &CubeOrbit {
        let c = self.cells[cell];
        &self.fibers[c.simplex].orbits[c.cube]
    }

    pub fn fiber(&self, simplex: usize) -> &SubdividedGraph {
        &self.fibers[simplex].s
    }

    pub fn boundary(&self, cell: usize) -> &[(usize, u32)] {
        &self.boundary[cell]
    }

    pub fn chain_complex(&self) -> &ChainComplexZ2 {
        &self.chain
    }

    /// Position of a cell among the cells of its dimension, as used by the
    /// chain complex.
    pub fn local_index(&self, cell: usize) -> usize {
        self.local[cell] as usize
    }

    /// Gluings along merge facets that dropped dimension. Expected to be 0.
    pub fn merge_dimension_drops(&self) -> usize {
        self.merge_drops
    }

    pub fn counts(&self) -> CellPoly {
        crate::fiber::counts_by_dim(self.cells.iter().map(|c| c.dim))
    }

    pub fn betti(&self) -> Vec<usize> {
        self.chain.betti()
    }

    pub fn euler(&self) -> i64 {
        self.chain.euler()
    }

    pub fn face_poset(&self) -> FacePoset {
        FacePoset::new(
            self.cells.iter().map(|c| c.dim).collect(),
            self.boundary.clone(),
            self.touches.clone(),
        )
    }
}

/// `Σ_σ x^{dim σ} P(C(σ))`: the cell counts of `X_{g,n}`.
pub fn total_poly(delta: &DeltaComplex, n: u32) -> Result<CellPoly> {
    sum_over_simplices(delta, n, |p, d| Ok(p.shift(d)))
}

/// `Σ_σ (-1)^{dim σ} P(C(σ))`. Agrees with the cell counts only at `x = -1`.
pub fn alternating_fiber_sum(delta: &DeltaComplex, n: u32) -> Result<CellPoly> {
    sum_over_simplices(delta, n, |p, d| if d % 2 == 0 { Ok(p) } else { p.scale(-1) })
}

fn sum_over_simplices(
    delta: &DeltaComplex,
    n: u32,
    weight: impl Fn(CellPoly, usize) -> Result<CellPoly> + Sync,
) -> Result<CellPoly> {
    let parts = delta
        .cells()
        .par_iter()
        .map(|c| {
            let s = SubdividedGraph::with_group(c.graph.clone(), c.aut.clone());
            weight(s.fiber_poly(n)?, c.dim())
        })
        .collect::<Result<Vec<_>>>()?;
    parts.iter().try_fold(CellPoly::zero(), |acc, p| acc.add(p))
}

/// χ(X_{g,n}).
pub fn euler_x(delta: &DeltaComplex, n: u32) -> Result<i64> {
    Ok(total_poly(delta, n)?.euler())
}

/// χ(TM_{g,n}). For genus 1, TM_{1,n} is modelled by X_{1,n-1}, so `n ≥ 1`.
pub fn euler_tm(delta: &DeltaComplex, n: u32) -> Result<i64> {
    if delta.genus() == 1 {
        let m = n.checked_sub(1).ok_or(Error::GenusOutOfRange(1))?;
        euler_x(delta, m)
    } else {
        euler_x(delta, n)
    }
}

fn ratio_str<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// An element whose fixed subcomplex has Euler characteristic at least the
/// base in absolute value without being equal to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixAnomaly {
    pub simplex: usize,
    pub element: usize,
    pub euler: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Asymptotics {
    pub genus: usize,
    pub base: i64,
    /// Coefficient of `base^n` in χ(X_{g,n}).
    #[serde(serialize_with = "ratio_str")]
    pub raw: Ratio<i64>,
    /// Coefficient of `base^n` in χ(TM_{g,n}).
    #[serde(serialize_with = "ratio_str")]
    pub tm: Ratio<i64>,
    pub anomalies: Vec<FixAnomaly>,
}

/// `Σ_σ (-1)^{dim σ} #{γ : χ(Fix γ) = base} / |Aut σ|`.
pub fn asymptotic_coefficient(delta: &DeltaComplex, base: i64) -> Result<Asymptotics> {
    let mut raw = Ratio::from_integer(0i64);
    let mut anomalies = Vec::new();
    for (i, c) in delta.cells().iter().enumerate() {
        let s = SubdividedGraph::with_group(c.graph.clone(), c.aut.clone());
        let mut hits = 0i64;
        for (k, a) in c.aut.iter().enumerate() {
            let chi = s.fixed_poly(a).euler();
            if chi == base {
                hits += 1;
            } else if chi.abs() >= base {
                anomalies.push(FixAnomaly {
                    simplex: i,
                    element: k,
                    euler: chi,
                });
            }
        }
        let sign = if c.dim() % 2 == 0 { 1 } else { -1 };
        raw += Ratio::new(sign * hits, c.aut.order() as i64);
    }
    let tm = if delta.genus() == 1 { raw / base } else { raw };
    Ok(Asymptotics {
        genus: delta.genus(),
        base,
        raw,
        tm,
        anomalies,
    })
}
