use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{SemilinearSet, SymError, SymMap};
use crate::finite_space::GbcSpace;
use crate::relalg::{Carrier, PointMap, PointSet, Relation};

/// Generalized bornologies on ℕ in the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Born {
    /// All finite subsets.
    Fin,
    /// The whole powerset.
    All,
    /// Only the empty set.
    Triv,
    /// Subsets of a fixed nonempty finite set.
    FinCap(BTreeSet<u64>),
}

/// Coarse structures on ℕ in the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Coarse {
    /// Subsets of the diagonal.
    Diag,
    /// Every relation.
    Full,
    /// The metric structure of `|x - y|`.
    Band,
    /// Subsets of the equivalence relation generated by finitely many pairs,
    /// stored as its nontrivial classes ordered by least element.
    FinGen(Vec<BTreeSet<u64>>),
}

impl Born {
    pub fn tag(&self) -> &'static str {
        match self {
            Born::Fin => "Fin",
            Born::All => "All",
            Born::Triv => "Triv",
            Born::FinCap(_) => "FinCap",
        }
    }

    pub fn fin_cap<I: IntoIterator<Item = u64>>(items: I) -> Born {
        let set: BTreeSet<u64> = items.into_iter().collect();
        if set.is_empty() {
            Born::Triv
        } else {
            Born::FinCap(set)
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, Born::Fin | Born::All)
    }

    /// Whether `s` is bounded.
    pub fn contains(&self, s: &SemilinearSet) -> bool {
        match self {
            Born::Fin => s.is_finite(),
            Born::All => true,
            Born::Triv => s.is_empty(),
            Born::FinCap(f) => s.is_subset(&SemilinearSet::from_finite(f.iter().copied())),
        }
    }

    fn meet(&self, other: &Born) -> Born {
        match (self, other) {
            (Born::All, b) | (b, Born::All) => b.clone(),
            (Born::Triv, _) | (_, Born::Triv) => Born::Triv,
            (Born::Fin, b) | (b, Born::Fin) => b.clone(),
            (Born::FinCap(f), Born::FinCap(g)) => Born::fin_cap(f.intersection(g).copied()),
        }
    }
}

impl Coarse {
    pub fn tag(&self) -> &'static str {
        match self {
            Coarse::Diag => "Diag",
            Coarse::Full => "Full",
            Coarse::Band => "Band",
            Coarse::FinGen(_) => "FinGen",
        }
    }

    /// The structure generated by the finitely many `pairs`; collapses to
    /// `Diag` when they all lie on the diagonal.
    pub fn fin_gen<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Coarse {
        let mut classes: Vec<BTreeSet<u64>> = Vec::new();
        for (x, y) in pairs {
            let hits: Vec<usize> = (0..classes.len())
                .filter(|&i| classes[i].contains(&x) || classes[i].contains(&y))
                .collect();
            let mut merged = BTreeSet::from([x, y]);
            for &i in hits.iter().rev() {
                merged.extend(classes.remove(i));
            }
            classes.push(merged);
        }
        classes.retain(|c| c.len() > 1);
        classes.sort();
        if classes.is_empty() {
            Coarse::Diag
        } else {
            Coarse::FinGen(classes)
        }
    }

    /// Nontrivial classes of the maximal entourage (empty unless `FinGen`).
    fn classes(&self) -> &[BTreeSet<u64>] {
        match self {
            Coarse::FinGen(classes) => classes,
            _ => &[],
        }
    }

    /// Thickening of `s` by the largest entourage, or by the union of all
    /// entourages for `Band`.
    pub fn saturate(&self, s: &SemilinearSet) -> SemilinearSet {
        match self {
            Coarse::Diag => s.clone(),
            Coarse::Full | Coarse::Band if s.is_empty() => SemilinearSet::empty(),
            Coarse::Full | Coarse::Band => SemilinearSet::all(),
            Coarse::FinGen(classes) => {
                let extra = classes
                    .iter()
                    .filter(|c| c.iter().any(|&x| s.contains(x)))
                    .flat_map(|c| c.iter().copied());
                s.union(&SemilinearSet::from_finite(extra))
            }
        }
    }

    /// Thickening by the band `{(x, y) : |x - y| < r}`.
    pub fn band(s: &SemilinearSet, r: u64) -> SemilinearSet {
        (1..r).fold(s.clone(), |out, k| {
            let down = s.preimage(&SymMap::affine(1, k).expect("valid"));
            out.union(&s.translate(k)).union(&down)
        })
    }

    fn join(&self, other: &Coarse) -> Coarse {
        match (self, other) {
            (Coarse::Full, _) | (_, Coarse::Full) => Coarse::Full,
            (Coarse::Band, _) | (_, Coarse::Band) => Coarse::Band,
            (Coarse::Diag, c) | (c, Coarse::Diag) => c.clone(),
            (Coarse::FinGen(a), Coarse::FinGen(b)) => Coarse::fin_gen(a.iter().chain(b).flat_map(|c| {
                let first = *c.first().expect("nonempty class");
                c.iter().map(move |&x| (first, x))
            })),
        }
    }
}

/// A generalized bornological coarse structure on ℕ from the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymSpace {
    born: Born,
    coarse: Coarse,
}

impl SymSpace {
    /// Validates the pair against the compatibility table after
    /// canonicalizing an empty `FinCap` to `Triv` and a diagonal `FinGen` to `Diag`.
    pub fn new(born: Born, coarse: Coarse) -> Result<Self, SymError> {
        let born = match born {
            Born::FinCap(f) => Born::fin_cap(f),
            b => b,
        };
        let coarse = match coarse {
            Coarse::FinGen(classes) => Coarse::fin_gen(classes.iter().flat_map(|c| {
                let first = *c.first().unwrap_or(&0);
                c.iter().map(move |&x| (first, x))
            })),
            c => c,
        };
        let ok = match (&coarse, &born) {
            (Coarse::Diag, _) => true,
            (Coarse::Full, b) => matches!(b, Born::All | Born::Triv),
            (Coarse::Band, b) => !matches!(b, Born::FinCap(_)),
            (Coarse::FinGen(classes), Born::FinCap(f)) => classes.iter().all(|c| c.is_subset(f) || c.is_disjoint(f)),
            (Coarse::FinGen(_), _) => true,
        };
        if !ok {
            return Err(SymError::Incompatible(format!("({}, {})", born.tag(), coarse.tag())));
        }
        Ok(SymSpace { born, coarse })
    }

    pub fn born(&self) -> &Born {
        &self.born
    }

    pub fn coarse(&self) -> &Coarse {
        &self.coarse
    }

    pub fn is_classical(&self) -> bool {
        self.born.is_classical()
    }

    /// Points of ℕ that behave differently from large numbers.
    pub(crate) fn special_bound(&self) -> u64 {
        let born = match &self.born {
            Born::FinCap(f) => f.last().map_or(0, |m| m + 1),
            _ => 0,
        };
        let coarse = self
            .coarse
            .classes()
            .iter()
            .filter_map(|c| c.last())
            .max()
            .map_or(0, |m| m + 1);
        born.max(coarse)
    }
}

impl fmt::Display for SymSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.born.tag(), self.coarse.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymMorphismVerdict {
    pub proper: bool,
    pub controlled: bool,
    pub reasons: Vec<String>,
}

impl SymMorphismVerdict {
    pub fn is_morphism(&self) -> bool {
        self.proper && self.controlled
    }
}

/// Finite image of `f` when its tail is constant.
fn finite_image(f: &SymMap) -> Option<BTreeSet<u64>> {
    let (n, a, _) = f.tail();
    (a == 0).then(|| f.exceptions().iter().copied().chain([f.apply(n)]).collect())
}

/// Whether all of `points` lie in one class of the maximal entourage of `c`.
fn in_one_class(points: &BTreeSet<u64>, c: &Coarse) -> bool {
    points.len() <= 1 || c.classes().iter().any(|class| points.is_subset(class))
}

/// Decides properness and controlledness of `f : dom → cod` by a rule table
/// over the tag pairs.
pub fn validate_sym_morphism(dom: &SymSpace, cod: &SymSpace, f: &SymMap) -> SymMorphismVerdict {
    let mut reasons = Vec::new();

    let proper = match (&dom.born, &cod.born) {
        (_, Born::Triv) | (Born::All, _) => true,
        (_, Born::All) => {
            reasons.push("ℕ is bounded in the codomain but not in the domain".to_string());
            false
        }
        (Born::Fin, Born::Fin) => {
            let ok = f.tail().1 >= 1;
            if !ok {
                reasons.push(format!("the preimage of {{{}}} is infinite", f.apply(f.tail().0)));
            }
            ok
        }
        (_, Born::Fin) => {
            reasons.push("preimages of points are nonempty but the domain bounds only a finite region".to_string());
            false
        }
        (dom_born, Born::FinCap(cap)) => {
            let pre = SemilinearSet::from_finite(cap.iter().copied()).preimage(f);
            let ok = dom_born.contains(&pre);
            if !ok {
                reasons.push(format!("the preimage {pre} of a bounded set is unbounded"));
            }
            ok
        }
    };

    let constant_or_one_class = |what: &str, reasons: &mut Vec<String>| -> bool {
        let ok = finite_image(f).is_some_and(|img| in_one_class(&img, &cod.coarse));
        if !ok {
            reasons.push(format!("{what} is sent outside every entourage of the codomain"));
        }
        ok
    };
    let controlled = match (&dom.coarse, &cod.coarse) {
        (Coarse::Diag, _) | (_, Coarse::Full) => true,
        (Coarse::Band, Coarse::Band) | (Coarse::FinGen(_), Coarse::Band) => true,
        (Coarse::Full, Coarse::Band) => {
            let ok = finite_image(f).is_some();
            if !ok {
                reasons.push("ℕ×ℕ is sent to pairs at unbounded distance".to_string());
            }
            ok
        }
        (Coarse::Full, _) => constant_or_one_class("ℕ×ℕ", &mut reasons),
        (Coarse::Band, _) => constant_or_one_class("the band of radius 1", &mut reasons),
        (Coarse::FinGen(classes), target) => {
            let bad = classes.iter().find(|c| {
                let img: BTreeSet<u64> = c.iter().map(|&x| f.apply(x)).collect();
                !in_one_class(&img, target)
            });
            if let Some(c) = bad {
                reasons.push(format!("the class {c:?} is not sent into one class of the codomain"));
            }
            bad.is_none()
        }
    };

    SymMorphismVerdict {
        proper,
        controlled,
        reasons,
    }
}

/// A finite diagram of symbolic spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymDiagram {
    names: Vec<String>,
    objects: Vec<SymSpace>,
    arrows: Vec<(usize, usize, SymMap)>,
}

impl SymDiagram {
    /// Every arrow must be a morphism.
    pub fn new(objects: Vec<(String, SymSpace)>, arrows: Vec<(usize, usize, SymMap)>) -> Result<Self, SymError> {
        let mut seen = BTreeSet::new();
        for (name, _) in &objects {
            if !seen.insert(name.clone()) {
                return Err(SymError::DuplicateObject(name.clone()));
            }
        }
        let (names, objects): (Vec<_>, Vec<_>) = objects.into_iter().unzip();
        for (i, (s, t, f)) in arrows.iter().enumerate() {
            if *s >= objects.len() || *t >= objects.len() {
                return Err(SymError::UnknownObject(i));
            }
            let verdict = validate_sym_morphism(&objects[*s], &objects[*t], f);
            if !verdict.is_morphism() {
                return Err(SymError::InvalidArrow {
                    arrow: i,
                    reasons: verdict.reasons,
                });
            }
        }
        Ok(SymDiagram { names, objects, arrows })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn objects(&self) -> &[SymSpace] {
        &self.objects
    }

    pub fn arrows(&self) -> &[(usize, usize, SymMap)] {
        &self.arrows
    }

    pub fn is_connected(&self) -> bool {
        if self.objects.is_empty() {
            return false;
        }
        let mut adjacent: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (s, t, _) in &self.arrows {
            adjacent.entry(*s).or_default().push(*t);
            adjacent.entry(*t).or_default().push(*s);
        }
        let mut seen = BTreeSet::from([0]);
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for &j in adjacent.get(&i).into_iter().flatten() {
                if seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        seen.len() == self.objects.len()
    }
}

/// Colimit of a connected diagram whose arrows are all the identity of ℕ.
///
/// The coarse structure is the join of the objects' structures. The
/// bornology consists of the sets `B` whose every thickening is bounded in
/// each object; in the catalog this is the meet of the bornologies, cut down
/// to the largest part compatible with the joined coarse structure.
pub fn sym_identity_colimit(d: &SymDiagram) -> Result<SymSpace, SymError> {
    if !d.is_connected() {
        return Err(SymError::UnsupportedDiagram(
            "the diagram must be nonempty and connected".into(),
        ));
    }
    if let Some(i) = d.arrows.iter().position(|(_, _, f)| !f.is_identity()) {
        return Err(SymError::UnsupportedDiagram(format!("arrow {i} is not the identity")));
    }
    let coarse = d.objects[1..]
        .iter()
        .fold(d.objects[0].coarse.clone(), |c, o| c.join(&o.coarse));
    let meet = d.objects[1..]
        .iter()
        .fold(d.objects[0].born.clone(), |b, o| b.meet(&o.born));
    let born = match (&coarse, meet) {
        (Coarse::Diag, b) => b,
        (Coarse::Full, Born::All) => Born::All,
        (Coarse::Full, _) => Born::Triv,
        (Coarse::Band, Born::FinCap(_)) => Born::Triv,
        (Coarse::Band, b) => b,
        (Coarse::FinGen(classes), Born::FinCap(f)) => Born::fin_cap(
            f.iter()
                .copied()
                .filter(|x| classes.iter().all(|c| !c.contains(x) || c.is_subset(&f))),
        ),
        (Coarse::FinGen(_), b) => b,
    };
    SymSpace::new(born, coarse)
}

/// Pushout of a span `1 ← 0 → 2` of identity maps.
pub fn sym_pushout(d: &SymDiagram) -> Result<SymSpace, SymError> {
    let is_span = d.len() == 3 && {
        let mut legs: Vec<(usize, usize)> = d.arrows.iter().map(|(s, t, _)| (*s, *t)).collect();
        legs.sort_unstable();
        legs == [(0, 1), (0, 2)]
    };
    if !is_span {
        return Err(SymError::UnsupportedDiagram("expected a span 1 ← 0 → 2".into()));
    }
    sym_identity_colimit(d)
}

/// The restriction of `x` to the carrier `{0, ..., n}`.
pub fn truncate_space(x: &SymSpace, n: u64) -> GbcSpace {
    let carrier = Carrier::range(n as usize + 1);
    let entourage = match &x.coarse {
        Coarse::Diag => Relation::diagonal(&carrier),
        // On a finite carrier some band already contains every pair.
        Coarse::Full | Coarse::Band => Relation::full(&carrier),
        Coarse::FinGen(classes) => {
            let mut e = Relation::diagonal(&carrier);
            for c in classes {
                let members: Vec<usize> = c.iter().filter(|&&v| v <= n).map(|&v| v as usize).collect();
                e = e
                    .union(&Relation::square(&PointSet::from_indices(&carrier, members)))
                    .expect("same carrier");
            }
            e
        }
    };
    let bounded = match &x.born {
        Born::Fin | Born::All => PointSet::full(&carrier),
        Born::Triv => PointSet::empty(&carrier),
        Born::FinCap(f) => PointSet::from_indices(&carrier, f.iter().filter(|&&v| v <= n).map(|&v| v as usize)),
    };
    GbcSpace::from_normal_form(entourage, bounded, None).expect("catalog structures truncate to valid normal forms")
}

/// The restriction of `f` to `{0, ..., n}`, if its image stays there.
pub fn truncate_map(f: &SymMap, n: u64) -> Option<PointMap> {
    let carrier = Carrier::range(n as usize + 1);
    let images: Option<Vec<usize>> = (0..=n)
        .map(|x| Some(f.apply(x)).filter(|&y| y <= n).map(|y| y as usize))
        .collect();
    PointMap::new(&carrier, &carrier, images?).ok()
}
