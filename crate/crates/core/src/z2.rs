//! Chain complexes over the two-element field.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// `boundary[d][j]` lists, in increasing order, the `(d-1)`-cells that
/// appear with odd coefficient in the boundary of the `j`-th `d`-cell.
/// `boundary[0]` is all empty.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ChainComplexZ2 {
    boundary: Vec<Vec<Vec<u32>>>,
}

impl ChainComplexZ2 {
    pub fn new(boundary: Vec<Vec<Vec<u32>>>) -> Self {
        ChainComplexZ2 { boundary }
    }

    /// Top dimension plus one (0 for the empty complex).
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.iter().all(Vec::is_empty)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.boundary.iter().map(Vec::len).collect()
    }

    pub fn boundary(&self, d: usize) -> &[Vec<u32>] {
        self.boundary.get(d).map_or(&[], |b| b.as_slice())
    }

    /// Verifies ∂∘∂ = 0.
    pub fn check_square_zero(&self) -> Result<()> {
        for d in 2..self.boundary.len() {
            for (cell, faces) in self.boundary[d].iter().enumerate() {
                let mut acc: Vec<u32> = Vec::new();
                for &f in faces {
                    acc = sym_diff(&acc, &self.boundary[d - 1][f as usize]);
                }
                if let Some(&face) = acc.first() {
                    return Err(Error::BoundarySquareNonzero {
                        dim: d,
                        cell,
                        face_dim: d - 2,
                        face: face as usize,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.boundary.iter().map(|cols| rank(cols)).collect()
    }

    pub fn betti(&self) -> Vec<usize> {
        let r = self.ranks();
        let counts = self.counts();
        (0..counts.len())
            .map(|d| counts[d] - r[d] - r.get(d + 1).copied().unwrap_or(0))
            .collect()
    }

    pub fn euler(&self) -> i64 {
        self.counts()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

/// True when the Betti numbers are those of a point.
pub fn is_acyclic(betti: &[usize]) -> bool {
    betti.first() == Some(&1) && betti[1..].iter().all(|&b| b == 0)
}

fn sym_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Rank of a sparse matrix given by sorted columns, by column reduction
/// on the largest row index.
pub fn rank(columns: &[Vec<u32>]) -> usize {
    let mut reduced: Vec<Vec<u32>> = Vec::new();
    let mut pivot_of: HashMap<u32, usize> = HashMap::new();
    for col in columns {
        let mut c = col.clone();
        while let Some(&p) = c.last() {
            match pivot_of.get(&p) {
                Some(&k) => c = sym_diff(&c, &reduced[k]),
                None => {
                    pivot_of.insert(p, reduced.len());
                    reduced.push(c);
                    break;
                }
            }
        }
    }
    reduced.len()
}

/// Sorted list of entries that occur an odd number of times.
pub fn odd_entries(mut entries: Vec<u32>) -> Vec<u32> {
    entries.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let mut j = i;
        while j < entries.len() && entries[j] == entries[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(entries[i]);
        }
        i = j;
    }
    out
}
