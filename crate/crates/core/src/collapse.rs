//! Search for sequences of elementary collapses in a face poset.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Cells with their codimension-one faces (with multiplicity) and any
/// lower-dimensional cells their boundary meets without covering a facet.
#[derive(Clone, Debug)]
pub struct FacePoset {
    dims: Vec<usize>,
    facets: Vec<Vec<(usize, u32)>>,
    touches: Vec<Vec<usize>>,
    /// Cells having this one as a facet or touch.
    uppers: Vec<Vec<usize>>,
}

impl FacePoset {
    pub fn new(dims: Vec<usize>, facets: Vec<Vec<(usize, u32)>>, touches: Vec<Vec<usize>>) -> Self {
        let mut uppers = vec![Vec::new(); dims.len()];
        for (c, fs) in facets.iter().enumerate() {
            for &(f, _) in fs {
                uppers[f].push(c);
            }
        }
        for (c, ts) in touches.iter().enumerate() {
            for &t in ts {
                uppers[t].push(c);
            }
        }
        for u in &mut uppers {
            u.sort_unstable();
            u.dedup();
        }
        FacePoset {
            dims,
            facets,
            touches,
            uppers,
        }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, c: usize) -> usize {
        self.dims[c]
    }

    pub fn facets(&self, c: usize) -> &[(usize, u32)] {
        &self.facets[c]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CollapseConfig {
    pub seed: u64,
    /// Elementary collapses allowed per restart.
    pub budget: usize,
    pub restarts: usize,
}

impl Default for CollapseConfig {
    fn default() -> Self {
        CollapseConfig {
            seed: 0,
            budget: 1_000_000,
            restarts: 16,
        }
    }
}

/// Removal pairs `(free face, coface)` in order, and the vertex left at the end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseCertificate {
    pub steps: Vec<(usize, usize)>,
    pub survivor: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CollapseVerdict {
    Collapsible(CollapseCertificate),
    /// No certificate found; the fewest cells any restart got down to.
    Unknown { remaining: usize },
}

struct State<'a> {
    p: &'a FacePoset,
    alive: Vec<bool>,
    live: usize,
    /// Alive uppers counted with facet multiplicity.
    up: Vec<u32>,
}

impl<'a> State<'a> {
    fn new(p: &'a FacePoset) -> Self {
        let mut up = vec![0u32; p.len()];
        for c in 0..p.len() {
            for &(f, m) in &p.facets[c] {
                up[f] += m;
            }
            for &t in &p.touches[c] {
                up[t] += 1;
            }
        }
        State {
            p,
            alive: vec![true; p.len()],
            live: p.len(),
            up,
        }
    }

    /// The coface making `f` free, if `f` is currently a free face.
    fn free_coface(&self, f: usize) -> Option<usize> {
        if !self.alive[f] || self.up[f] != 1 {
            return None;
        }
        let c = *self.p.uppers[f].iter().find(|&&c| self.alive[c])?;
        let is_facet = self.p.facets[c].iter().any(|&(x, m)| x == f && m == 1);
        (is_facet && self.up[c] == 0 && self.p.dims[c] == self.p.dims[f] + 1).then_some(c)
    }

    /// Removes `c`; returns the cells whose upper count reached 0 or 1.
    fn remove(&mut self, c: usize, changed: &mut Vec<usize>) {
        self.alive[c] = false;
        self.live -= 1;
        let p = self.p;
        let lowers = p.facets[c].iter().copied().chain(p.touches[c].iter().map(|&t| (t, 1)));
        for (f, m) in lowers {
            self.up[f] -= m;
            if self.up[f] <= 1 {
                changed.push(f);
            }
        }
    }

    fn collapse(&mut self, f: usize, c: usize, changed: &mut Vec<usize>) {
        self.remove(c, changed);
        self.remove(f, changed);
    }
}

fn run(p: &FacePoset, cfg: &CollapseConfig, restart: usize) -> std::result::Result<CollapseCertificate, usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
    let mut st = State::new(p);
    let top = p.dims.iter().copied().max().unwrap_or(0);
    // candidate free faces bucketed by dimension
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for f in 0..p.len() {
        if st.up[f] == 1 {
            buckets[p.dims[f]].push(f);
        }
    }
    let mut steps = Vec::new();
    let mut changed = Vec::new();
    loop {
        if st.live == 1 || steps.len() >= cfg.budget {
            break;
        }
        let Some(d) = (0..=top).rev().find(|&d| !buckets[d].is_empty()) else {
            break;
        };
        let k = if restart == 0 {
            buckets[d].len() - 1
        } else {
            rng.random_range(0..buckets[d].len())
        };
        let f = buckets[d].swap_remove(k);
        let Some(c) = st.free_coface(f) else {
            continue;
        };
        changed.clear();
        st.collapse(f, c, &mut changed);
        steps.push((f, c));
        for &x in &changed {
            if st.up[x] == 1 {
                buckets[p.dims[x]].push(x);
            } else if st.up[x] == 0 {
                for &(g, _) in &p.facets[x] {
                    if st.up[g] == 1 {
                        buckets[p.dims[g]].push(g);
                    }
                }
            }
        }
    }
    if st.live == 1 {
        let survivor = st.alive.iter().position(|&a| a).unwrap();
        if p.dims[survivor] == 0 {
            return Ok(CollapseCertificate { steps, survivor });
        }
    }
    Err(st.live)
}

/// Greedy collapse search with seeded random restarts run in parallel. The
/// result does not depend on thread scheduling: the lowest-numbered
/// successful restart wins.
pub fn collapse_search(p: &FacePoset, cfg: &CollapseConfig) -> CollapseVerdict {
    let results: Vec<_> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|r| run(p, cfg, r))
        .collect();
    let mut remaining = usize::MAX;
    for r in results {
        match r {
            Ok(cert) => return CollapseVerdict::Collapsible(cert),
            Err(left) => remaining = remaining.min(left),
        }
    }
    CollapseVerdict::Unknown { remaining }
}

/// Replays a certificate, checking each step removes a free face with its
/// unique coface and that a single vertex is left.
pub fn verify_certificate(p: &FacePoset, cert: &CollapseCertificate) -> Result<()> {
    let mut st = State::new(p);
    let mut scratch = Vec::new();
    for (i, &(f, c)) in cert.steps.iter().enumerate() {
        if f >= p.len() || c >= p.len() || st.free_coface(f) != Some(c) {
            return Err(Error::Consistency(format!("collapse step {i} ({f}, {c}) is not elementary")));
        }
        st.collapse(f, c, &mut scratch);
    }
    if st.live != 1 || !st.alive.get(cert.survivor).copied().unwrap_or(false) || p.dims[cert.survivor] != 0 {
        return Err(Error::Consistency("collapse does not end at a single vertex".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(filled: bool) -> FacePoset {
        let mut dims = vec![0, 0, 0, 1, 1, 1];
        let mut facets = vec![
            vec![],
            vec![],
            vec![],
            vec![(0, 1), (1, 1)],
            vec![(1, 1), (2, 1)],
            vec![(0, 1), (2, 1)],
        ];
        if filled {
            dims.push(2);
            facets.push(vec![(3, 1), (4, 1), (5, 1)]);
        }
        let n = dims.len();
        FacePoset::new(dims, facets, vec![Vec::new(); n])
    }

    #[test]
    fn filled_triangle_collapses() {
        let p = triangle(true);
        let CollapseVerdict::Collapsible(cert) = collapse_search(&p, &CollapseConfig::default()) else {
            panic!("expected a certificate");
        };
        verify_certificate(&p, &cert).unwrap();
        assert_eq!(cert.steps.len(), 3);
    }

    #[test]
    fn circle_does_not() {
        let p = triangle(false);
        assert_eq!(
            collapse_search(&p, &CollapseConfig::default()),
            CollapseVerdict::Unknown { remaining: 6 }
        );
    }

    #[test]
    fn doubled_facet_is_not_free() {
        // a 1-cell attached at both ends to one vertex, plus a disc on it
        let p = FacePoset::new(vec![0, 1, 2], vec![vec![], vec![(0, 2)], vec![(1, 2)]], vec![vec![]; 3]);
        assert!(matches!(collapse_search(&p, &CollapseConfig::default()), CollapseVerdict::Unknown { .. }));
    }

    #[test]
    fn bad_certificate_rejected() {
        let p = triangle(true);
        let cert = CollapseCertificate {
            steps: vec![(0, 3)],
            survivor: 1,
        };
        assert!(verify_certificate(&p, &cert).is_err());
    }
}
