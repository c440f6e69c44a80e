//! Closeness, coarse equivalences, flasqueness, big families, nice subsets
//! and coarsely excisive pairs on finite spaces.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::finite_space::{
    class_representatives, enumerate_morphisms, generator_count, generator_or_identity, tensor, validate_morphism,
    GbcSpace, Morphism, SpaceError,
};
use crate::relalg::{Carrier, PointMap, PointSet, RelError, Relation};

/// Default bound on `|X|` for witness-free searches.
pub const DEFAULT_SEARCH_CAP: usize = 5;

/// Exhaustive niceness checks enumerate `2^k` entourages for `k = |E ∖ Δ|`
/// up to this bound.
pub const NICE_ENUMERATION_CAP: usize = 12;

const INVERSE_SEARCH_BUDGET: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error("morphisms are not parallel")]
    NotParallel,
    #[error("witness is not a self-morphism of the space")]
    NotASelfMap,
    #[error("witness is not equivariant")]
    NotEquivariant,
    #[error("{0} is not invariant under the action")]
    NotInvariant(&'static str),
    #[error("{what} of size {requested} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
}

fn parallel(f: &Morphism, g: &Morphism) -> Result<(), HomotopyError> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(HomotopyError::NotParallel);
    }
    Ok(())
}

/// First point `x` with `(f(x), g(x))` outside the codomain entourage.
pub fn far_point(f: &Morphism, g: &Morphism) -> Result<Option<usize>, HomotopyError> {
    parallel(f, g)?;
    Ok((0..f.dom().len()).find(|&x| !f.cod().entourage().contains(f.apply(x), g.apply(x))))
}

pub fn are_close(f: &Morphism, g: &Morphism) -> Result<bool, HomotopyError> {
    Ok(far_point(f, g)?.is_none())
}

/// Closeness decided through the cylinder: `f` and `g` are close iff
/// `h(0,x) = f(x), h(1,x) = g(x)` is a morphism `{0,1} ⊗ X → Y`, where
/// `{0,1}` carries the maximal structures.
pub fn close_via_cylinder(f: &Morphism, g: &Morphism) -> Result<bool, HomotopyError> {
    parallel(f, g)?;
    let interval = GbcSpace::max_max(&Carrier::new(["0", "1"])?);
    let x = f.dom();
    let cylinder = Arc::new(tensor(&interval, x));
    let images = (0..cylinder.len())
        .map(|p| {
            let (i, point) = (p / x.len(), p % x.len());
            if i == 0 {
                f.apply(point)
            } else {
                g.apply(point)
            }
        })
        .collect();
    let h = PointMap::new(cylinder.carrier(), f.cod().carrier(), images)?;
    Ok(validate_morphism(&cylinder, f.cod(), h).is_ok())
}

#[derive(Clone, Debug)]
pub struct EquivalenceVerdict {
    pub equivalence: bool,
    /// A coarse inverse when one exists.
    pub inverse: Option<Morphism>,
}

/// Decides whether `f` is a coarse equivalence and produces an inverse.
///
/// Without actions an inverse exists iff `f` induces a bijection on coarse
/// components that preserves and reflects boundedness; the inverse sends a
/// point to the least point of the matching component. With an action the
/// equivariant inverse is searched orbit by orbit.
pub fn is_equivalence(f: &Morphism) -> Result<EquivalenceVerdict, HomotopyError> {
    let inverse = if f.dom().action().is_none() && f.cod().action().is_none() {
        constructive_inverse(f)
    } else {
        search_inverse(f)?
    };
    Ok(EquivalenceVerdict {
        equivalence: inverse.is_some(),
        inverse,
    })
}

fn constructive_inverse(f: &Morphism) -> Option<Morphism> {
    let (dom, cod) = (f.dom(), f.cod());
    let dom_reps = class_representatives(dom);
    let cod_reps = class_representatives(cod);
    // Component map on representatives, and its inverse.
    let mut back = vec![usize::MAX; cod.len()];
    for class in dom.entourage().classes() {
        let x = class.first()?;
        let target = cod_reps[f.apply(x)];
        if back[target] != usize::MAX {
            return None;
        }
        let bounded = dom.bounded().contains(x);
        if bounded != cod.bounded().contains(target) {
            return None;
        }
        back[target] = dom_reps[x];
    }
    let images: Option<Vec<usize>> = (0..cod.len())
        .map(|y| Some(back[cod_reps[y]]).filter(|&x| x != usize::MAX))
        .collect();
    let map = PointMap::new(cod.carrier(), dom.carrier(), images?).ok()?;
    validate_morphism(cod, dom, map).ok()
}

/// Exact search for an equivariant coarse inverse `g` with
/// `(f(g(y)), y) ∈ E_Y` and `(g(f(x)), x) ∈ E_X`.
fn search_inverse(f: &Morphism) -> Result<Option<Morphism>, HomotopyError> {
    let (dom, cod) = (f.dom().clone(), f.cod().clone());
    let gens = generator_count(&[dom.action(), cod.action()]);
    let dom_gens: Vec<PointMap> = (0..gens)
        .map(|i| generator_or_identity(dom.action(), dom.carrier(), i))
        .collect();
    let cod_gens: Vec<PointMap> = (0..gens)
        .map(|i| generator_or_identity(cod.action(), cod.carrier(), i))
        .collect();
    let dom_class = class_ids(&dom);
    let cod_class = class_ids(&cod);
    let preimages: Vec<Vec<usize>> = (0..cod.len())
        .map(|y| (0..dom.len()).filter(|&x| f.apply(x) == y).collect())
        .collect();
    let candidates: Vec<Vec<usize>> = (0..cod.len())
        .map(|y| {
            (0..dom.len())
                .filter(|&x| cod.entourage().contains(f.apply(x), y))
                .filter(|&x| cod.bounded().contains(y) || !dom.bounded().contains(x))
                .collect()
        })
        .collect();

    struct State {
        image: Vec<Option<usize>>,
        class_target: Vec<Option<usize>>,
        trail: Vec<(usize, bool)>,
        nodes: usize,
    }

    let assign = |st: &mut State, y: usize, x: usize| -> bool {
        let mut queue = vec![(y, x)];
        while let Some((y, x)) = queue.pop() {
            match st.image[y] {
                Some(prev) if prev == x => continue,
                Some(_) => return false,
                None => {}
            }
            if !candidates[y].contains(&x) || preimages[y].iter().any(|&p| !dom.entourage().contains(p, x)) {
                return false;
            }
            let c = cod_class[y];
            match st.class_target[c] {
                Some(t) if t != dom_class[x] => return false,
                Some(_) => st.trail.push((y, false)),
                None => {
                    st.class_target[c] = Some(dom_class[x]);
                    st.trail.push((y, true));
                }
            }
            st.image[y] = Some(x);
            st.nodes += 1;
            for (gd, gc) in dom_gens.iter().zip(&cod_gens) {
                queue.push((gc.apply(y), gd.apply(x)));
            }
        }
        true
    };

    fn undo(st: &mut State, mark: usize, cod_class: &[usize]) {
        while st.trail.len() > mark {
            let (y, set_class) = st.trail.pop().expect("nonempty trail");
            st.image[y] = None;
            if set_class {
                st.class_target[cod_class[y]] = None;
            }
        }
    }

    fn go(
        st: &mut State,
        y: usize,
        candidates: &[Vec<usize>],
        cod_class: &[usize],
        assign: &dyn Fn(&mut State, usize, usize) -> bool,
    ) -> Result<bool, HomotopyError> {
        if st.nodes > INVERSE_SEARCH_BUDGET {
            return Err(HomotopyError::CapExceeded {
                what: "coarse inverse search",
                requested: st.nodes,
                cap: INVERSE_SEARCH_BUDGET,
            });
        }
        let Some(y) = (y..st.image.len()).find(|&v| st.image[v].is_none()) else {
            return Ok(true);
        };
        for &x in &candidates[y] {
            let mark = st.trail.len();
            if assign(st, y, x) && go(st, y + 1, candidates, cod_class, assign)? {
                return Ok(true);
            }
            undo(st, mark, cod_class);
        }
        Ok(false)
    }

    let mut st = State {
        image: vec![None; cod.len()],
        class_target: vec![None; cod.len()],
        trail: Vec::new(),
        nodes: 0,
    };
    if !go(&mut st, 0, &candidates, &cod_class, &assign)? {
        return Ok(None);
    }
    let images = st.image.into_iter().map(|x| x.expect("complete assignment")).collect();
    let map = PointMap::new(cod.carrier(), dom.carrier(), images)?;
    let g = validate_morphism(&cod, &dom, map).expect("search enforces properness and control");
    debug_assert!(g.is_equivariant());
    Ok(Some(g))
}

/// Brute-force inverse search over every morphism `cod → dom`, for carriers
/// up to `search_cap` points.
pub fn is_equivalence_exhaustive(f: &Morphism, search_cap: usize) -> Result<EquivalenceVerdict, HomotopyError> {
    let size = f.dom().len().max(f.cod().len());
    if size > search_cap {
        return Err(HomotopyError::CapExceeded {
            what: "equivalence search carrier",
            requested: size,
            cap: search_cap,
        });
    }
    let id_dom = Morphism::identity(f.dom());
    let id_cod = Morphism::identity(f.cod());
    for g in enumerate_morphisms(f.cod(), f.dom())? {
        if are_close(&f.then(&g)?, &id_dom)? && are_close(&g.then(f)?, &id_cod)? {
            return Ok(EquivalenceVerdict {
                equivalence: true,
                inverse: Some(g),
            });
        }
    }
    Ok(EquivalenceVerdict {
        equivalence: false,
        inverse: None,
    })
}

fn class_ids(space: &GbcSpace) -> Vec<usize> {
    let mut ids = vec![0; space.len()];
    for (c, class) in space.entourage().classes().iter().enumerate() {
        for x in class.iter() {
            ids[x] = c;
        }
    }
    ids
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlasqueFailure {
    /// The witness is not close to the identity at this point.
    NotClose(String),
    /// The iterated images of the maximal entourage leave it.
    IteratesUncontrolled,
    /// Every iterated image meets the bounded points.
    ImagesStayBounded,
    /// No self-morphism satisfies the conditions.
    NoWitness,
}

#[derive(Clone, Debug)]
pub struct FlasqueVerdict {
    pub flasque: bool,
    pub witness: Option<Morphism>,
    /// Least `k` with `f^k(X)` disjoint from the orbit of the bounded points.
    pub eventual_k: Option<usize>,
    pub failure: Option<FlasqueFailure>,
}

/// Checks the flasqueness conditions for `witness`, or searches every
/// self-morphism when none is given (carriers up to `search_cap` points).
pub fn is_flasque(
    x: &Arc<GbcSpace>,
    witness: Option<&Morphism>,
    search_cap: usize,
) -> Result<FlasqueVerdict, HomotopyError> {
    if let Some(f) = witness {
        if f.dom() != x || f.cod() != x {
            return Err(HomotopyError::NotASelfMap);
        }
        if !f.is_equivariant() {
            return Err(HomotopyError::NotEquivariant);
        }
        return check_flasque(f);
    }
    if x.len() > search_cap {
        return Err(HomotopyError::CapExceeded {
            what: "flasque witness search carrier",
            requested: x.len(),
            cap: search_cap,
        });
    }
    for f in enumerate_morphisms(x, x)? {
        let verdict = check_flasque(&f)?;
        if verdict.flasque {
            return Ok(verdict);
        }
    }
    Ok(FlasqueVerdict {
        flasque: false,
        witness: None,
        eventual_k: None,
        failure: Some(FlasqueFailure::NoWitness),
    })
}

fn check_flasque(f: &Morphism) -> Result<FlasqueVerdict, HomotopyError> {
    let x = f.dom();
    let fail = |failure| FlasqueVerdict {
        flasque: false,
        witness: Some(f.clone()),
        eventual_k: None,
        failure: Some(failure),
    };
    let id = Morphism::identity(x);
    if let Some(p) = far_point(f, &id)? {
        return Ok(fail(FlasqueFailure::NotClose(x.carrier().name(p).to_string())));
    }
    if !iterates_controlled(f)? {
        return Ok(fail(FlasqueFailure::IteratesUncontrolled));
    }
    let forbidden = x.orbit(x.bounded());
    let mut image = PointSet::full(x.carrier());
    for k in 0..=x.len() {
        if image.is_disjoint(&forbidden)? {
            return Ok(FlasqueVerdict {
                flasque: true,
                witness: Some(f.clone()),
                eventual_k: Some(k),
                failure: None,
            });
        }
        image = f.map().image_set(&image)?;
    }
    // The images decrease, so they are stable after |X| steps.
    Ok(fail(FlasqueFailure::ImagesStayBounded))
}

/// Whether `⋃_k (f^k×f^k)(E)` stays inside `E`.
pub fn iterates_controlled(f: &Morphism) -> Result<bool, HomotopyError> {
    let e = f.dom().entourage();
    let mut acc = e.clone();
    loop {
        let next = acc.union(&acc.image(f.map())?)?;
        if next == acc {
            break;
        }
        acc = next;
    }
    Ok(acc.is_subset(e)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyViolation {
    Empty,
    CarrierMismatch,
    NotInvariant { member: usize },
    NotFiltered { first: usize, second: usize },
    NotThickeningClosed { member: usize },
    ComplementNotInvariant,
    NotCovering,
}

/// A filtered, thickening-closed finite family of invariant subsets.
#[derive(Clone, Debug)]
pub struct BigFamily {
    space: Arc<GbcSpace>,
    members: Vec<PointSet>,
}

impl BigFamily {
    pub fn space(&self) -> &Arc<GbcSpace> {
        &self.space
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }
}

#[derive(Clone, Debug)]
pub struct ComplementaryPair {
    pub z: PointSet,
    pub family: BigFamily,
}

/// Checks the big-family axioms. Thickening closure is checked against the
/// maximal entourage, which covers every smaller one.
pub fn validate_big_family(space: &Arc<GbcSpace>, members: Vec<PointSet>) -> Result<BigFamily, FamilyViolation> {
    if members.is_empty() {
        return Err(FamilyViolation::Empty);
    }
    for (i, m) in members.iter().enumerate() {
        if m.carrier() != space.carrier() {
            return Err(FamilyViolation::CarrierMismatch);
        }
        if !space.is_invariant_set(m) {
            return Err(FamilyViolation::NotInvariant { member: i });
        }
    }
    let covered_by = |s: &PointSet| members.iter().any(|m| s.is_subset(m).expect("same carrier"));
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate().skip(i + 1) {
            if !covered_by(&a.union(b).expect("same carrier")) {
                return Err(FamilyViolation::NotFiltered { first: i, second: j });
            }
        }
        if !covered_by(&space.entourage().thicken(a).expect("same carrier")) {
            return Err(FamilyViolation::NotThickeningClosed { member: i });
        }
    }
    Ok(BigFamily {
        space: space.clone(),
        members,
    })
}

pub fn validate_complementary_pair(
    space: &Arc<GbcSpace>,
    z: PointSet,
    members: Vec<PointSet>,
) -> Result<ComplementaryPair, FamilyViolation> {
    if z.carrier() != space.carrier() {
        return Err(FamilyViolation::CarrierMismatch);
    }
    if !space.is_invariant_set(&z) {
        return Err(FamilyViolation::ComplementNotInvariant);
    }
    let family = validate_big_family(space, members)?;
    if !family
        .members
        .iter()
        .any(|y| z.union(y).expect("same carrier").is_full())
    {
        return Err(FamilyViolation::NotCovering);
    }
    Ok(ComplementaryPair { z, family })
}

#[derive(Clone, Debug)]
pub struct NiceVerdict {
    pub nice: bool,
    /// An invariant entourage `U` for which `A → U[A]` is not an equivalence.
    pub failing_entourage: Option<Relation>,
    pub entourages_checked: usize,
    /// Whether every invariant reflexive entourage was enumerated.
    pub exhaustive: bool,
}

/// Whether `A → U[A]` is a coarse equivalence for every invariant
/// reflexive entourage `U`, both sides carrying subspace structures.
///
/// All such `U` are enumerated when `|E ∖ Δ|` is at most
/// [`NICE_ENUMERATION_CAP`]; otherwise only `U = E` is checked, which
/// suffices: an equivariant coarse inverse `E[A] → A` restricts to one on
/// every invariant `U[A] ⊆ E[A]`.
pub fn is_nice(x: &Arc<GbcSpace>, a: &PointSet) -> Result<NiceVerdict, HomotopyError> {
    let off_diagonal = x.entourage().difference(&Relation::diagonal(x.carrier()))?;
    if off_diagonal.len() > NICE_ENUMERATION_CAP {
        return is_nice_fast(x, a);
    }
    check_invariant(x, a, "subset")?;
    let pairs: Vec<(usize, usize)> = off_diagonal.pairs().collect();
    let mut checked = 0;
    for mask in 0u64..1 << pairs.len() {
        let u = Relation::from_pairs(
            x.carrier(),
            (0..x.len()).map(|p| (p, p)).chain(
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p),
            ),
        );
        if !x.is_invariant_relation(&u) {
            continue;
        }
        checked += 1;
        if !inclusion_is_equivalence(x, a, &u)? {
            return Ok(NiceVerdict {
                nice: false,
                failing_entourage: Some(u),
                entourages_checked: checked,
                exhaustive: true,
            });
        }
    }
    Ok(NiceVerdict {
        nice: true,
        failing_entourage: None,
        entourages_checked: checked,
        exhaustive: true,
    })
}

/// Niceness checked at `U = E` only.
pub fn is_nice_fast(x: &Arc<GbcSpace>, a: &PointSet) -> Result<NiceVerdict, HomotopyError> {
    check_invariant(x, a, "subset")?;
    let nice = inclusion_is_equivalence(x, a, x.entourage())?;
    Ok(NiceVerdict {
        nice,
        failing_entourage: (!nice).then(|| x.entourage().clone()),
        entourages_checked: 1,
        exhaustive: false,
    })
}

fn check_invariant(x: &GbcSpace, s: &PointSet, what: &'static str) -> Result<(), HomotopyError> {
    if s.carrier() != x.carrier() {
        return Err(RelError::CarrierMismatch.into());
    }
    if !x.is_invariant_set(s) {
        return Err(HomotopyError::NotInvariant(what));
    }
    Ok(())
}

/// Whether the inclusion `A → U[A]` (subspace structures) is a coarse equivalence.
pub fn inclusion_is_equivalence(x: &Arc<GbcSpace>, a: &PointSet, u: &Relation) -> Result<bool, HomotopyError> {
    let thick = u.thicken(a)?;
    let (sub_a, inc_a) = x.subspace(a)?;
    let (sub_b, inc_b) = x.subspace(&thick)?;
    let position: Vec<Option<usize>> = {
        let mut pos = vec![None; x.len()];
        for (i, p) in inc_b.images().iter().enumerate() {
            pos[*p] = Some(i);
        }
        pos
    };
    let images = inc_a.images().iter().map(|&p| position[p].expect("A ⊆ U[A]")).collect();
    let (sub_a, sub_b) = (Arc::new(sub_a), Arc::new(sub_b));
    let map = PointMap::new(sub_a.carrier(), sub_b.carrier(), images)?;
    let inclusion = validate_morphism(&sub_a, &sub_b, map).expect("subspace inclusions are morphisms");
    Ok(is_equivalence(&inclusion)?.equivalence)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExcisionFailure {
    /// A point outside `Y ∪ Z`.
    NotCovering { point: String },
    /// A point of `E[Y] ∩ E[Z]` outside `E[Y ∩ Z]`.
    ThickeningsEscape { point: String },
    /// `E[Y] ∩ Z` is not nice.
    NotNice { set: Vec<String> },
}

#[derive(Clone, Debug)]
pub struct ExcisionVerdict {
    pub excisive: bool,
    pub failure: Option<ExcisionFailure>,
}

/// Whether `(Y, Z)` is coarsely excisive.
///
/// The thickening condition is monotone in the entourage, so it is checked
/// at `E` on both sides. Niceness is required of `E[Y] ∩ Z`: any cofinal
/// family of invariant entourages of a finite space contains `E`.
pub fn is_coarsely_excisive(x: &Arc<GbcSpace>, y: &PointSet, z: &PointSet) -> Result<ExcisionVerdict, HomotopyError> {
    check_invariant(x, y, "first set")?;
    check_invariant(x, z, "second set")?;
    let name = |p: usize| x.carrier().name(p).to_string();
    if let Some(p) = y.union(z)?.complement().first() {
        return Ok(ExcisionVerdict {
            excisive: false,
            failure: Some(ExcisionFailure::NotCovering { point: name(p) }),
        });
    }
    let e = x.entourage();
    let (ey, ez) = (e.thicken(y)?, e.thicken(z)?);
    let meet = e.thicken(&y.intersection(z)?)?;
    if let Some(p) = ey.intersection(&ez)?.difference(&meet)?.first() {
        return Ok(ExcisionVerdict {
            excisive: false,
            failure: Some(ExcisionFailure::ThickeningsEscape { point: name(p) }),
        });
    }
    let candidate = ey.intersection(z)?;
    if !is_nice(x, &candidate)?.nice {
        return Ok(ExcisionVerdict {
            excisive: false,
            failure: Some(ExcisionFailure::NotNice { set: candidate.names() }),
        });
    }
    Ok(ExcisionVerdict {
        excisive: true,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_space::{all_spaces_up_to, GroupAction};
    use crate::limits::coproduct;

    fn swap_space() -> Arc<GbcSpace> {
        let c = Carrier::new(["p", "q", "y"]).unwrap();
        let swap = GroupAction::new(&c, vec![vec![1, 0, 2]]).unwrap();
        Arc::new(GbcSpace::from_normal_form(Relation::full(&c), PointSet::empty(&c), Some(swap)).unwrap())
    }

    #[test]
    fn constant_maps_into_distinct_classes_are_far() {
        let one = Arc::new(GbcSpace::min_min(&Carrier::range(1)));
        let two = Arc::new(GbcSpace::min_min(&Carrier::range(2)));
        let f = validate_morphism(&one, &two, PointMap::constant(one.carrier(), two.carrier(), 0).unwrap()).unwrap();
        let g = validate_morphism(&one, &two, PointMap::constant(one.carrier(), two.carrier(), 1).unwrap()).unwrap();
        assert!(!are_close(&f, &g).unwrap());
        assert!(are_close(&f, &f).unwrap());
        assert!(!close_via_cylinder(&f, &g).unwrap());
    }

    #[test]
    fn closeness_matches_cylinder() {
        let spaces = all_spaces_up_to(2);
        for x in &spaces {
            for y in &spaces {
                let homs: Vec<Morphism> = enumerate_morphisms(x, y).unwrap().collect();
                for f in &homs {
                    for g in &homs {
                        assert_eq!(are_close(f, g).unwrap(), close_via_cylinder(f, g).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn constructive_equivalence_matches_search() {
        let spaces = all_spaces_up_to(3);
        for x in &spaces {
            for y in &spaces {
                for f in enumerate_morphisms(x, y).unwrap() {
                    let fast = is_equivalence(&f).unwrap();
                    let slow = is_equivalence_exhaustive(&f, 5).unwrap();
                    let searched = search_inverse(&f).unwrap();
                    assert_eq!(fast.equivalence, slow.equivalence);
                    assert_eq!(fast.equivalence, searched.is_some());
                    if let Some(g) = fast.inverse {
                        assert!(are_close(&f.then(&g).unwrap(), &Morphism::identity(x)).unwrap());
                        assert!(are_close(&g.then(&f).unwrap(), &Morphism::identity(y)).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn flasque_examples() {
        let c = Carrier::range(3);
        let me = Arc::new(GbcSpace::max_empty(&c));
        let v = is_flasque(&me, Some(&Morphism::identity(&me)), 5).unwrap();
        assert!(v.flasque);
        assert_eq!(v.eventual_k, Some(0));
        let mm = Arc::new(GbcSpace::max_max(&c));
        let v = is_flasque(&mm, Some(&Morphism::identity(&mm)), 5).unwrap();
        assert!(!v.flasque);
        assert!(matches!(v.failure, Some(FlasqueFailure::ImagesStayBounded)));
        assert!(matches!(
            is_flasque(&mm, None, 2),
            Err(HomotopyError::CapExceeded { .. })
        ));
        for x in all_spaces_up_to(3) {
            let v = is_flasque(&x, None, 5).unwrap();
            assert_eq!(v.flasque, x.bounded().is_empty());
        }
    }

    #[test]
    fn big_families() {
        let c = Carrier::range(4);
        let x = Arc::new(
            GbcSpace::from_generators(&c, &[Relation::from_pairs(&c, [(0, 1), (2, 3)])], &[], true, None).unwrap(),
        );
        let low = PointSet::from_indices(&c, [0, 1]);
        assert!(validate_big_family(&x, vec![low.clone(), PointSet::full(&c)]).is_ok());
        assert_eq!(
            validate_big_family(&x, vec![PointSet::singleton(&c, 0)]).unwrap_err(),
            FamilyViolation::NotThickeningClosed { member: 0 }
        );
        let high = PointSet::from_indices(&c, [2, 3]);
        assert_eq!(
            validate_big_family(&x, vec![low.clone(), high.clone()]).unwrap_err(),
            FamilyViolation::NotFiltered { first: 0, second: 1 }
        );
        assert!(validate_complementary_pair(&x, high.clone(), vec![low.clone()]).is_ok());
        assert_eq!(
            validate_complementary_pair(&x, PointSet::empty(&c), vec![low]).unwrap_err(),
            FamilyViolation::NotCovering
        );
        assert!(validate_complementary_pair(&x, PointSet::full(&c), vec![PointSet::full(&c)]).is_ok());
        assert_eq!(validate_big_family(&x, vec![]).unwrap_err(), FamilyViolation::Empty);
    }

    #[test]
    fn nice_examples() {
        let x = swap_space();
        let all = PointSet::full(x.carrier());
        assert!(is_nice(&x, &all).unwrap().nice);
        assert!(is_nice(&x, &PointSet::empty(x.carrier())).unwrap().nice);
        let pq = PointSet::from_indices(x.carrier(), [0, 1]);
        let v = is_nice(&x, &pq).unwrap();
        assert!(!v.nice);
        assert!(!is_nice_fast(&x, &pq).unwrap().nice);
        assert!(is_nice(&x, &PointSet::singleton(x.carrier(), 2)).unwrap().nice);
        assert!(matches!(
            is_nice(&x, &PointSet::singleton(x.carrier(), 0)),
            Err(HomotopyError::NotInvariant(_))
        ));
    }

    #[test]
    fn trivial_action_makes_every_subset_nice() {
        for x in all_spaces_up_to(3) {
            for mask in 0..1usize << x.len() {
                let a = PointSet::from_indices(x.carrier(), (0..x.len()).filter(|i| mask >> i & 1 == 1));
                assert!(is_nice(&x, &a).unwrap().nice);
            }
        }
    }

    #[test]
    fn excision_examples() {
        for x in all_spaces_up_to(3) {
            let v = is_coarsely_excisive(&x, x.bounded(), &x.unbounded()).unwrap();
            assert!(v.excisive);
            let full = PointSet::full(x.carrier());
            assert!(is_coarsely_excisive(&x, &full, &full).unwrap().excisive);
        }
        let a = Arc::new(GbcSpace::max_max(&Carrier::range(2)));
        let b = Arc::new(GbcSpace::max_empty(&Carrier::range(2)));
        let s = coproduct(&[a, b]);
        let y = s.legs[0].map().range();
        let z = s.legs[1].map().range();
        assert!(is_coarsely_excisive(&s.apex, &y, &z).unwrap().excisive);
        let c = Carrier::range(3);
        let full = Arc::new(GbcSpace::max_max(&c));
        let v = is_coarsely_excisive(&full, &PointSet::singleton(&c, 0), &PointSet::singleton(&c, 1)).unwrap();
        assert!(matches!(v.failure, Some(ExcisionFailure::NotCovering { .. })));
        let v = is_coarsely_excisive(&full, &PointSet::from_indices(&c, [0, 1]), &PointSet::singleton(&c, 2)).unwrap();
        assert!(matches!(v.failure, Some(ExcisionFailure::ThickeningsEscape { .. })));
    }

    #[test]
    fn equivariant_inverse_search() {
        let x = swap_space();
        let id = Morphism::identity(&x);
        assert!(is_equivalence(&id).unwrap().equivalence);
        let point = Arc::new(GbcSpace::max_empty(&Carrier::range(1)));
        let to_point =
            validate_morphism(&x, &point, PointMap::constant(x.carrier(), point.carrier(), 0).unwrap()).unwrap();
        // The only candidate inverse must pick a fixed point: `y`.
        let v = is_equivalence(&to_point).unwrap();
        assert!(v.equivalence);
        assert_eq!(v.inverse.unwrap().map().images(), &[2]);
    }
}
