//! Finite relation algebra over an ordered carrier.
//!
//! Relations are dense bit matrices indexed by the carrier's fixed ordering,
//! point sets are bit vectors over the same indexing. Every operation that
//! combines two values checks that they live on the same carrier; mixing
//! carriers is always an error, never a coercion.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("carrier mismatch")]
    CarrierMismatch,
    #[error("duplicate carrier element `{0}`")]
    DuplicateElement(String),
    #[error("unknown carrier element `{0}`")]
    UnknownElement(String),
    #[error("map lists {got} images but its domain has {expected} points")]
    MapLength { expected: usize, got: usize },
    #[error("image index {0} lies outside the codomain")]
    ImageOutOfRange(usize),
}

struct CarrierData {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

/// An ordered universe of distinct named points.
///
/// Identity is structural: two carriers are equal when they list the same
/// names in the same order.
#[derive(Clone)]
pub struct Carrier(Arc<CarrierData>);

impl Carrier {
    pub fn new<I, S>(names: I) -> Result<Self, RelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(RelError::DuplicateElement(name.clone()));
            }
        }
        Ok(Carrier(Arc::new(CarrierData { names, index })))
    }

    /// The carrier `{"0", "1", ..., "n-1"}`.
    pub fn range(n: usize) -> Self {
        Carrier::new((0..n).map(|i| i.to_string())).expect("decimal names are distinct")
    }

    pub fn empty() -> Self {
        Carrier::range(0)
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, RelError> {
        self.index_of(name)
            .ok_or_else(|| RelError::UnknownElement(name.to_string()))
    }

    fn check(&self, other: &Carrier) -> Result<(), RelError> {
        if self == other {
            Ok(())
        } else {
            Err(RelError::CarrierMismatch)
        }
    }
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.names == other.0.names
    }
}

impl Eq for Carrier {}

impl Hash for Carrier {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.names.hash(state);
    }
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

/// A subset of a carrier.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    carrier: Carrier,
    bits: Vec<u64>,
}

impl PointSet {
    pub fn empty(carrier: &Carrier) -> Self {
        PointSet {
            carrier: carrier.clone(),
            bits: vec![0; words_for(carrier.len())],
        }
    }

    pub fn full(carrier: &Carrier) -> Self {
        let mut s = PointSet::empty(carrier);
        for i in 0..carrier.len() {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(carrier: &Carrier, indices: I) -> Self {
        let mut s = PointSet::empty(carrier);
        for i in indices {
            assert!(i < carrier.len(), "point index {i} out of range");
            s.insert(i);
        }
        s
    }

    pub fn from_names<I, S>(carrier: &Carrier, names: I) -> Result<Self, RelError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut s = PointSet::empty(carrier);
        for name in names {
            s.insert(carrier.require(name.as_ref())?);
        }
        Ok(s)
    }

    pub fn singleton(carrier: &Carrier, i: usize) -> Self {
        PointSet::from_indices(carrier, [i])
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.bits[i / WORD] |= 1 << (i % WORD);
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.carrier.len() && self.bits[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.carrier.len()
    }

    /// Member indices in carrier order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_bits(&self.bits)
    }

    pub fn names(&self) -> Vec<String> {
        self.iter().map(|i| self.carrier.name(i).to_string()).collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet, RelError> {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet, RelError> {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet, RelError> {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> PointSet {
        PointSet::full(&self.carrier).difference(self).expect("same carrier")
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool, RelError> {
        self.carrier.check(&other.carrier)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &PointSet) -> Result<bool, RelError> {
        Ok(self.intersection(other)?.is_empty())
    }

    fn zip(&self, other: &PointSet, op: impl Fn(u64, u64) -> u64) -> Result<PointSet, RelError> {
        self.carrier.check(&other.carrier)?;
        Ok(PointSet {
            carrier: self.carrier.clone(),
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| op(a, b)).collect(),
        })
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|i| self.carrier.name(i)))
            .finish()
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(wi * WORD + bit)
        })
    })
}

/// A binary relation on a carrier, stored row-major as a bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    carrier: Carrier,
    stride: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(carrier: &Carrier) -> Self {
        let stride = words_for(carrier.len());
        Relation {
            carrier: carrier.clone(),
            stride,
            bits: vec![0; stride * carrier.len()],
        }
    }

    pub fn diagonal(carrier: &Carrier) -> Self {
        let mut r = Relation::empty(carrier);
        for i in 0..carrier.len() {
            r.insert(i, i);
        }
        r
    }

    pub fn full(carrier: &Carrier) -> Self {
        let mut r = Relation::empty(carrier);
        for i in 0..carrier.len() {
            for j in 0..carrier.len() {
                r.insert(i, j);
            }
        }
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(carrier: &Carrier, pairs: I) -> Self {
        let mut r = Relation::empty(carrier);
        for (i, j) in pairs {
            assert!(i < carrier.len() && j < carrier.len(), "pair ({i}, {j}) out of range");
            r.insert(i, j);
        }
        r
    }

    pub fn from_named_pairs<I, S>(carrier: &Carrier, pairs: I) -> Result<Self, RelError>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut r = Relation::empty(carrier);
        for (a, b) in pairs {
            r.insert(carrier.require(a.as_ref())?, carrier.require(b.as_ref())?);
        }
        Ok(r)
    }

    /// The relation `S × S`.
    pub fn square(set: &PointSet) -> Self {
        let mut r = Relation::empty(set.carrier());
        for i in set.iter() {
            r.or_row(i, &set.bits);
        }
        r
    }

    pub(crate) fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.stride + j / WORD] |= 1 << (j % WORD);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    fn or_row(&mut self, i: usize, src: &[u64]) {
        let stride = self.stride;
        for (d, s) in self.bits[i * stride..(i + 1) * stride].iter_mut().zip(src) {
            *d |= s;
        }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.row(i)[j / WORD] >> (j % WORD) & 1 == 1
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Pairs in row-major carrier order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.carrier.len()).flat_map(move |i| iter_bits(self.row(i)).map(move |j| (i, j)))
    }

    pub fn named_pairs(&self) -> Vec<(String, String)> {
        self.pairs()
            .map(|(i, j)| (self.carrier.name(i).to_string(), self.carrier.name(j).to_string()))
            .collect()
    }

    /// `{y : (x, y) ∈ self}` as a point set.
    pub fn successors(&self, x: usize) -> PointSet {
        PointSet {
            carrier: self.carrier.clone(),
            bits: self.row(x).to_vec(),
        }
    }

    pub fn inverse(&self) -> Relation {
        let mut r = Relation::empty(&self.carrier);
        for (i, j) in self.pairs() {
            r.insert(j, i);
        }
        r
    }

    /// `{(x, y) : ∃z, (x, z) ∈ self and (z, y) ∈ other}`.
    pub fn compose(&self, other: &Relation) -> Result<Relation, RelError> {
        self.carrier.check(&other.carrier)?;
        let mut r = Relation::empty(&self.carrier);
        for x in 0..self.carrier.len() {
            for z in iter_bits(self.row(x)) {
                r.or_row(x, other.row(z));
            }
        }
        Ok(r)
    }

    /// The thickening `{x : ∃b ∈ set, (x, b) ∈ self}`.
    pub fn thicken(&self, set: &PointSet) -> Result<PointSet, RelError> {
        self.carrier.check(&set.carrier)?;
        let mut out = PointSet::empty(&self.carrier);
        for x in 0..self.carrier.len() {
            if self.row(x).iter().zip(&set.bits).any(|(a, b)| a & b != 0) {
                out.insert(x);
            }
        }
        Ok(out)
    }

    pub fn union(&self, other: &Relation) -> Result<Relation, RelError> {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation, RelError> {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Relation) -> Result<Relation, RelError> {
        self.zip(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Relation) -> Result<bool, RelError> {
        self.carrier.check(&other.carrier)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    /// The pairs of `self` lying in `set × set`; the carrier is unchanged.
    pub fn restrict(&self, set: &PointSet) -> Result<Relation, RelError> {
        self.carrier.check(&set.carrier)?;
        let mut r = Relation::empty(&self.carrier);
        for x in set.iter() {
            let row: Vec<u64> = self.row(x).iter().zip(&set.bits).map(|(a, b)| a & b).collect();
            r.or_row(x, &row);
        }
        Ok(r)
    }

    fn zip(&self, other: &Relation, op: impl Fn(u64, u64) -> u64) -> Result<Relation, RelError> {
        self.carrier.check(&other.carrier)?;
        Ok(Relation {
            carrier: self.carrier.clone(),
            stride: self.stride,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.carrier.len()).all(|i| self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(i, j)| self.contains(j, i))
    }

    pub fn is_transitive(&self) -> bool {
        let sq = self.compose(self).expect("same carrier");
        sq.is_subset(self).expect("same carrier")
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// The smallest equivalence relation containing every generator.
    ///
    /// Symmetrizes, adds the diagonal, then squares until the relation stops
    /// growing; each round doubles the path length covered, so at most
    /// `log2(n) + 1` rounds run.
    pub fn equivalence_closure(carrier: &Carrier, gens: &[Relation]) -> Result<Relation, RelError> {
        let mut r = Relation::diagonal(carrier);
        for g in gens {
            carrier.check(&g.carrier)?;
            r = r.union(g)?;
        }
        r = r.union(&r.inverse())?;
        loop {
            let next = r.union(&r.compose(&r)?)?;
            if next == r {
                return Ok(r);
            }
            r = next;
        }
    }

    /// Classes of an equivalence relation, ordered by least member.
    pub fn classes(&self) -> Vec<PointSet> {
        debug_assert!(self.is_equivalence());
        let mut seen = PointSet::empty(&self.carrier);
        let mut out = Vec::new();
        for x in 0..self.carrier.len() {
            if seen.contains(x) {
                continue;
            }
            let class = self.successors(x);
            seen = seen.union(&class).expect("same carrier");
            out.push(class);
        }
        out
    }

    /// `(f × f)(self)`, a relation on the codomain of `map`.
    pub fn image(&self, map: &PointMap) -> Result<Relation, RelError> {
        self.carrier.check(&map.dom)?;
        let mut r = Relation::empty(&map.cod);
        for (i, j) in self.pairs() {
            r.insert(map.images[i], map.images[j]);
        }
        Ok(r)
    }

    /// `(f × f)⁻¹(self)`, a relation on the domain of `map`.
    pub fn preimage(&self, map: &PointMap) -> Result<Relation, RelError> {
        self.carrier.check(&map.cod)?;
        let mut r = Relation::empty(&map.dom);
        for i in 0..map.dom.len() {
            for j in 0..map.dom.len() {
                if self.contains(map.images[i], map.images[j]) {
                    r.insert(i, j);
                }
            }
        }
        Ok(r)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().map(|(i, j)| (self.carrier.name(i), self.carrier.name(j))))
            .finish()
    }
}

/// A total function between two carriers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointMap {
    dom: Carrier,
    cod: Carrier,
    images: Vec<usize>,
}

impl PointMap {
    pub fn new(dom: &Carrier, cod: &Carrier, images: Vec<usize>) -> Result<Self, RelError> {
        if images.len() != dom.len() {
            return Err(RelError::MapLength {
                expected: dom.len(),
                got: images.len(),
            });
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= cod.len()) {
            return Err(RelError::ImageOutOfRange(bad));
        }
        Ok(PointMap {
            dom: dom.clone(),
            cod: cod.clone(),
            images,
        })
    }

    /// Builds a map from a name table; every domain point must be listed.
    pub fn from_table<'a, I>(dom: &Carrier, cod: &Carrier, table: I) -> Result<Self, RelError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut images = vec![None; dom.len()];
        for (x, y) in table {
            images[dom.require(x)?] = Some(cod.require(y)?);
        }
        let got = images.iter().filter(|v| v.is_some()).count();
        let images: Option<Vec<usize>> = images.into_iter().collect();
        match images {
            Some(images) => PointMap::new(dom, cod, images),
            None => Err(RelError::MapLength {
                expected: dom.len(),
                got,
            }),
        }
    }

    pub fn identity(carrier: &Carrier) -> Self {
        PointMap {
            dom: carrier.clone(),
            cod: carrier.clone(),
            images: (0..carrier.len()).collect(),
        }
    }

    pub fn constant(dom: &Carrier, cod: &Carrier, y: usize) -> Result<Self, RelError> {
        PointMap::new(dom, cod, vec![y; dom.len()])
    }

    /// The inclusion of `set` (as its own carrier `sub`) into the ambient carrier.
    pub fn inclusion(sub: &Carrier, set: &PointSet) -> Result<Self, RelError> {
        PointMap::new(sub, set.carrier(), set.iter().collect())
    }

    pub fn dom(&self) -> &Carrier {
        &self.dom
    }

    pub fn cod(&self) -> &Carrier {
        &self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PointMap) -> Result<PointMap, RelError> {
        self.cod.check(&next.dom)?;
        Ok(PointMap {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            images: self.images.iter().map(|&y| next.images[y]).collect(),
        })
    }

    pub fn image_set(&self, set: &PointSet) -> Result<PointSet, RelError> {
        self.dom.check(&set.carrier)?;
        Ok(PointSet::from_indices(&self.cod, set.iter().map(|x| self.images[x])))
    }

    pub fn preimage_set(&self, set: &PointSet) -> Result<PointSet, RelError> {
        self.cod.check(&set.carrier)?;
        Ok(PointSet::from_indices(
            &self.dom,
            (0..self.dom.len()).filter(|&x| set.contains(self.images[x])),
        ))
    }

    pub fn range(&self) -> PointSet {
        PointSet::from_indices(&self.cod, self.images.iter().copied())
    }

    pub fn is_injective(&self) -> bool {
        self.range().len() == self.dom.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.range().len() == self.cod.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn inverse(&self) -> Option<PointMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut images = vec![0; self.cod.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Some(PointMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            images,
        })
    }

    /// `(name, image name)` pairs in domain order.
    pub fn table(&self) -> Vec<(String, String)> {
        self.images
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.dom.name(x).to_string(), self.cod.name(y).to_string()))
            .collect()
    }
}

impl fmt::Debug for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.images
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| (self.dom.name(x), self.cod.name(y))),
            )
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> Carrier {
        Carrier::range(n)
    }

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(&c(n), pairs.iter().copied())
    }

    #[test]
    fn inverse_swaps_pairs() {
        assert_eq!(rel(3, &[(1, 2)]).inverse(), rel(3, &[(2, 1)]));
        let d = Relation::diagonal(&c(4));
        assert_eq!(d.inverse(), d);
    }

    #[test]
    fn compose_single_pairs() {
        let u = rel(5, &[(1, 2)]);
        assert_eq!(u.compose(&rel(5, &[(2, 3)])).unwrap(), rel(5, &[(1, 3)]));
        assert!(u.compose(&rel(5, &[(3, 4)])).unwrap().is_empty());
        let d = Relation::diagonal(&c(5));
        assert_eq!(d.compose(&u).unwrap(), u);
    }

    #[test]
    fn band_thickening() {
        let carrier = c(6);
        let band = Relation::from_pairs(
            &carrier,
            (0..6)
                .flat_map(|x| (0..6).map(move |y| (x, y)))
                .filter(|&(x, y): &(usize, usize)| x.abs_diff(y) <= 1),
        );
        let b = PointSet::singleton(&carrier, 2);
        assert_eq!(band.thicken(&b).unwrap(), PointSet::from_indices(&carrier, [1, 2, 3]));
        assert!(band.thicken(&PointSet::empty(&carrier)).unwrap().is_empty());
        assert_eq!(Relation::diagonal(&carrier).thicken(&b).unwrap(), b);
    }

    #[test]
    fn closure_examples() {
        let carrier = c(4);
        assert_eq!(
            Relation::equivalence_closure(&carrier, &[]).unwrap(),
            Relation::diagonal(&carrier)
        );
        let closed = Relation::equivalence_closure(&carrier, &[rel(4, &[(1, 2), (2, 3)])]).unwrap();
        let expected = Relation::diagonal(&carrier)
            .union(&Relation::square(&PointSet::from_indices(&carrier, [1, 2, 3])))
            .unwrap();
        assert_eq!(closed, expected);
        let full = Relation::full(&carrier);
        assert_eq!(
            Relation::equivalence_closure(&carrier, std::slice::from_ref(&full)).unwrap(),
            full
        );
    }

    #[test]
    fn restrict_and_subset() {
        let carrier = c(3);
        assert!(Relation::diagonal(&carrier)
            .is_subset(&Relation::full(&carrier))
            .unwrap());
        let s = PointSet::from_indices(&carrier, [0, 1]);
        assert_eq!(Relation::full(&carrier).restrict(&s).unwrap(), Relation::square(&s));
    }

    #[test]
    fn carrier_mismatch_is_an_error() {
        let a = rel(3, &[(0, 1)]);
        let b = rel(4, &[(0, 1)]);
        assert_eq!(a.compose(&b), Err(RelError::CarrierMismatch));
        assert_eq!(a.union(&b), Err(RelError::CarrierMismatch));
        assert_eq!(a.thicken(&PointSet::empty(&c(2))), Err(RelError::CarrierMismatch));
        let renamed = Carrier::new(["a", "b", "c"]).unwrap();
        assert!(a.is_subset(&Relation::full(&renamed)).is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        assert_eq!(
            Carrier::new(["x", "y", "x"]).unwrap_err(),
            RelError::DuplicateElement("x".into())
        );
    }

    #[test]
    fn wide_carriers_work() {
        let carrier = c(130);
        let chain = Relation::from_pairs(&carrier, (0..129).map(|i| (i, i + 1)));
        let closed = Relation::equivalence_closure(&carrier, &[chain]).unwrap();
        assert_eq!(closed, Relation::full(&carrier));
        let s = PointSet::singleton(&carrier, 127);
        assert_eq!(closed.thicken(&s).unwrap().len(), 130);
    }

    #[test]
    fn map_inverse_and_preimage() {
        let a = c(3);
        let f = PointMap::new(&a, &a, vec![2, 0, 1]).unwrap();
        let g = f.inverse().unwrap();
        assert_eq!(f.then(&g).unwrap(), PointMap::identity(&a));
        let k = PointMap::constant(&a, &c(2), 1).unwrap();
        assert!(k.inverse().is_none());
        assert_eq!(
            k.preimage_set(&PointSet::singleton(&c(2), 1)).unwrap(),
            PointSet::full(&a)
        );
        assert!(PointMap::new(&a, &c(2), vec![0, 1, 2]).is_err());
    }
}
