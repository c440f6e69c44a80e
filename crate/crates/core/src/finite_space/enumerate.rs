use std::sync::Arc;

use super::morphism::{class_representatives, Morphism};
use super::{GbcSpace, SpaceError};
use crate::relalg::{Carrier, PointMap, PointSet, Relation};

pub const DEFAULT_ENUMERATION_CAP: usize = 4;

/// Largest `|Y|^|X|` for which [`enumerate_morphisms`] will search.
pub const MAX_HOM_CANDIDATES: u128 = 1 << 24;

/// All normal-form spaces (trivial action) on the carrier `0..n`.
pub fn enumerate_spaces(n: usize) -> Result<SpaceIter, SpaceError> {
    enumerate_spaces_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_spaces_with_cap(n: usize, cap: usize) -> Result<SpaceIter, SpaceError> {
    if n > cap {
        return Err(SpaceError::CapExceeded {
            what: "enumerated carrier",
            requested: n,
            cap,
        });
    }
    Ok(SpaceIter {
        carrier: Carrier::range(n),
        partitions: partitions(n),
        partition: 0,
        mask: 0,
    })
}

/// Every space with at most `n` points, smallest carriers first.
pub fn all_spaces_up_to(n: usize) -> Vec<Arc<GbcSpace>> {
    (0..=n)
        .flat_map(|k| enumerate_spaces_with_cap(k, n).expect("within cap"))
        .map(Arc::new)
        .collect()
}

/// Restricted growth strings: `rgs[i]` is the class index of point `i`.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for c in 0..=limit {
            prefix.push(c);
            grow(prefix, n, max.max(c), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, 0, &mut out);
    out
}

pub struct SpaceIter {
    carrier: Carrier,
    partitions: Vec<Vec<usize>>,
    partition: usize,
    mask: u64,
}

impl Iterator for SpaceIter {
    type Item = GbcSpace;

    fn next(&mut self) -> Option<GbcSpace> {
        let rgs = self.partitions.get(self.partition)?;
        let classes = rgs.iter().max().map_or(0, |m| m + 1);
        let n = rgs.len();
        let entourage = Relation::from_pairs(
            &self.carrier,
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| rgs[i] == rgs[j]),
        );
        let bounded = PointSet::from_indices(&self.carrier, (0..n).filter(|&i| self.mask >> rgs[i] & 1 == 1));
        self.mask += 1;
        if self.mask >> classes != 0 {
            self.mask = 0;
            self.partition += 1;
        }
        Some(GbcSpace::trusted(entourage, bounded, None))
    }
}

/// All equivariant morphisms `dom → cod`, in lexicographic order of their
/// image tables.
pub fn enumerate_morphisms(dom: &Arc<GbcSpace>, cod: &Arc<GbcSpace>) -> Result<Morphisms, SpaceError> {
    let (n, m) = (dom.len(), cod.len());
    let candidates = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if candidates > MAX_HOM_CANDIDATES && m > 1 {
        return Err(SpaceError::CapExceeded {
            what: "hom-set search space",
            requested: candidates.min(usize::MAX as u128) as usize,
            cap: MAX_HOM_CANDIDATES as usize,
        });
    }
    // Equivariance constraints f(g x) = g f(x), checked once both points are assigned.
    let gens = super::generator_count(&[dom.action(), cod.action()]);
    let mut constraints = vec![Vec::new(); n];
    let mut cod_gens = Vec::new();
    for gi in 0..gens {
        let gd = super::generator_or_identity(dom.action(), dom.carrier(), gi);
        cod_gens.push(super::generator_or_identity(cod.action(), cod.carrier(), gi));
        for a in 0..n {
            let b = gd.apply(a);
            constraints[a.max(b)].push((a, b, gi));
        }
    }
    Ok(Morphisms {
        dom: dom.clone(),
        cod: cod.clone(),
        reps: class_representatives(dom),
        constraints,
        cod_gens,
        images: vec![0; n],
        cursor: vec![0; n.max(1)],
        depth: 0,
        done: false,
    })
}

pub struct Morphisms {
    dom: Arc<GbcSpace>,
    cod: Arc<GbcSpace>,
    reps: Vec<usize>,
    constraints: Vec<Vec<(usize, usize, usize)>>,
    cod_gens: Vec<PointMap>,
    images: Vec<usize>,
    cursor: Vec<usize>,
    depth: usize,
    done: bool,
}

impl Morphisms {
    fn admissible(&self, x: usize, y: usize) -> bool {
        if !self.dom.bounded().contains(x) && self.cod.bounded().contains(y) {
            return false;
        }
        let r = self.reps[x];
        if r < x && !self.cod.entourage().contains(y, self.images[r]) {
            return false;
        }
        self.constraints[x].iter().all(|&(a, b, gi)| {
            let fa = if a == x { y } else { self.images[a] };
            let fb = if b == x { y } else { self.images[b] };
            fb == self.cod_gens[gi].apply(fa)
        })
    }

    fn emit(&self) -> Morphism {
        let map = PointMap::new(self.dom.carrier(), self.cod.carrier(), self.images.clone()).expect("in range");
        Morphism::trusted(self.dom.clone(), self.cod.clone(), map)
    }
}

impl Iterator for Morphisms {
    type Item = Morphism;

    fn next(&mut self) -> Option<Morphism> {
        if self.done {
            return None;
        }
        let (n, m) = (self.dom.len(), self.cod.len());
        if n == 0 {
            self.done = true;
            return Some(self.emit());
        }
        let mut d = self.depth;
        loop {
            if d == n {
                self.depth = n - 1;
                return Some(self.emit());
            }
            let mut found = false;
            while self.cursor[d] < m {
                let y = self.cursor[d];
                self.cursor[d] += 1;
                if self.admissible(d, y) {
                    self.images[d] = y;
                    found = true;
                    break;
                }
            }
            if found {
                d += 1;
                if d < n {
                    self.cursor[d] = 0;
                }
            } else if d == 0 {
                self.done = true;
                return None;
            } else {
                d -= 1;
            }
        }
    }
}
