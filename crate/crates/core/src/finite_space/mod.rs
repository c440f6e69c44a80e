//! Finite generalized Γ-bornological coarse spaces in normal form.
//!
//! On a finite carrier every coarse structure is the family of subrelations
//! of one equivalence relation `E` (the union of the whole family is itself
//! an entourage and absorbs compositions), and every generalized bornology is
//! the powerset of one region `Xb`. A [`GbcSpace`] stores exactly that pair,
//! so membership questions reduce to containment tests. Compatibility of the
//! two structures is equivalent to `Xb` being a union of `E`-classes.

mod action;
mod enumerate;
mod morphism;

use std::sync::Arc;

use thiserror::Error;

pub(crate) use action::{componentwise_action, equivariance_violation, generator_count, generator_or_identity};
pub use action::{ActionError, GroupAction};
pub use enumerate::{
    all_spaces_up_to, enumerate_morphisms, enumerate_spaces, enumerate_spaces_with_cap, Morphisms, SpaceIter,
    DEFAULT_ENUMERATION_CAP, MAX_HOM_CANDIDATES,
};
pub(crate) use morphism::{class_representatives, is_morphism};
pub use morphism::{validate_morphism, Morphism, Violation};

use crate::naming::tuple_name;
use crate::relalg::{Carrier, PointMap, PointSet, RelError, Relation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("incompatible structures: `{escaping}` lies in the entourage class {class:?} of bounded point `{bounded}` but is unbounded")]
    IncompatibleStructures {
        class: Vec<String>,
        bounded: String,
        escaping: String,
    },
    #[error("action generator {generator} does not preserve the {structure} (witness {witness})")]
    NonInvariantGenerator {
        generator: usize,
        structure: &'static str,
        witness: String,
    },
    #[error("the maximal entourage must be an equivalence relation")]
    NotAnEquivalence,
    #[error("relation is not an entourage: pair ({0}, {1}) lies outside the maximal entourage")]
    NotAnEntourage(String, String),
    #[error("{what} of size {requested} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
}

/// A finite generalized Γ-bornological coarse space.
///
/// Entourages are the subrelations of [`entourage`](Self::entourage); bounded
/// sets are the subsets of [`bounded`](Self::bounded).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GbcSpace {
    carrier: Carrier,
    entourage: Relation,
    bounded: PointSet,
    action: Option<GroupAction>,
}

/// Coarse components of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub classes: Vec<PointSet>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn is_connected(&self) -> bool {
        self.classes.len() == 1
    }
}

/// The decomposition `X ≅ X_b ⨿ X_h`.
#[derive(Clone, Debug)]
pub struct Split {
    pub bounded_part: Arc<GbcSpace>,
    pub unbounded_part: Arc<GbcSpace>,
    pub coproduct: Arc<GbcSpace>,
    pub to_coproduct: Morphism,
    pub from_coproduct: Morphism,
}

impl GbcSpace {
    /// Builds the space generated by coarse and bornology generators.
    ///
    /// With `classical` set the bounded region is the whole carrier, since a
    /// classical bornology contains every finite set.
    pub fn from_generators(
        carrier: &Carrier,
        coarse_gens: &[Relation],
        born_gens: &[PointSet],
        classical: bool,
        action: Option<GroupAction>,
    ) -> Result<Self, SpaceError> {
        let entourage = Relation::equivalence_closure(carrier, coarse_gens)?;
        let mut bounded = PointSet::empty(carrier);
        for b in born_gens {
            bounded = bounded.union(b)?;
        }
        if classical {
            bounded = PointSet::full(carrier);
        }
        GbcSpace::from_normal_form(entourage, bounded, action)
    }

    /// Validates a normal-form pair directly.
    pub fn from_normal_form(
        entourage: Relation,
        bounded: PointSet,
        action: Option<GroupAction>,
    ) -> Result<Self, SpaceError> {
        let carrier = entourage.carrier().clone();
        if bounded.carrier() != &carrier {
            return Err(RelError::CarrierMismatch.into());
        }
        if !entourage.is_equivalence() {
            return Err(SpaceError::NotAnEquivalence);
        }
        if let Some(err) = incompatibility(&entourage, &bounded) {
            return Err(err);
        }
        let action = match action {
            Some(a) if a.carrier() != &carrier => return Err(RelError::CarrierMismatch.into()),
            Some(a) if a.generators().is_empty() => None,
            other => other,
        };
        if let Some(a) = &action {
            if let Some((g, (x, y))) = a.relation_violation(&entourage) {
                return Err(SpaceError::NonInvariantGenerator {
                    generator: g,
                    structure: "coarse structure",
                    witness: format!("({}, {})", carrier.name(x), carrier.name(y)),
                });
            }
            if let Some((g, x)) = a.set_violation(&bounded) {
                return Err(SpaceError::NonInvariantGenerator {
                    generator: g,
                    structure: "bornology",
                    witness: carrier.name(x).to_string(),
                });
            }
        }
        Ok(GbcSpace {
            carrier,
            entourage,
            bounded,
            action,
        })
    }

    /// `X_{min,min}`: diagonal entourages, every set bounded.
    pub fn min_min(carrier: &Carrier) -> Self {
        GbcSpace::trusted(Relation::diagonal(carrier), PointSet::full(carrier), None)
    }

    /// `X_{min,max}`. On a finite carrier the minimal and maximal classical
    /// bornologies coincide, so this equals [`min_min`](Self::min_min).
    pub fn min_max(carrier: &Carrier) -> Self {
        GbcSpace::min_min(carrier)
    }

    /// `X_{max,max}`: everything controlled, everything bounded.
    pub fn max_max(carrier: &Carrier) -> Self {
        GbcSpace::trusted(Relation::full(carrier), PointSet::full(carrier), None)
    }

    /// `X_{max,∅}`: everything controlled, only `∅` bounded.
    pub fn max_empty(carrier: &Carrier) -> Self {
        GbcSpace::trusted(Relation::full(carrier), PointSet::empty(carrier), None)
    }

    /// The one-point space with an unbounded point (the final object).
    pub fn final_object() -> Self {
        GbcSpace::max_empty(&Carrier::new(["()"]).expect("one name"))
    }

    pub(crate) fn trusted(entourage: Relation, bounded: PointSet, action: Option<GroupAction>) -> Self {
        debug_assert!(entourage.is_equivalence());
        debug_assert!(incompatibility(&entourage, &bounded).is_none());
        GbcSpace {
            carrier: entourage.carrier().clone(),
            entourage,
            bounded,
            action: action.filter(|a| !a.generators().is_empty()),
        }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// The maximal entourage `E`.
    pub fn entourage(&self) -> &Relation {
        &self.entourage
    }

    /// The bounded region `X_b`.
    pub fn bounded(&self) -> &PointSet {
        &self.bounded
    }

    /// The unbounded points `X_h = X ∖ X_b`.
    pub fn unbounded(&self) -> PointSet {
        self.bounded.complement()
    }

    pub fn action(&self) -> Option<&GroupAction> {
        self.action.as_ref()
    }

    /// Locally bounded, i.e. an object of the classical category.
    pub fn is_classical(&self) -> bool {
        self.bounded.is_full()
    }

    pub fn entourage_member(&self, u: &Relation) -> Result<bool, RelError> {
        u.is_subset(&self.entourage)
    }

    pub fn bounded_member(&self, b: &PointSet) -> Result<bool, RelError> {
        b.is_subset(&self.bounded)
    }

    pub fn is_invariant_set(&self, set: &PointSet) -> bool {
        self.action.as_ref().is_none_or(|a| a.preserves_set(set))
    }

    pub fn is_invariant_relation(&self, rel: &Relation) -> bool {
        self.action.as_ref().is_none_or(|a| a.preserves_relation(rel))
    }

    /// `ΓS`.
    pub fn orbit(&self, set: &PointSet) -> PointSet {
        match &self.action {
            Some(a) => a.orbit(set),
            None => set.clone(),
        }
    }

    pub fn components(&self) -> Components {
        Components {
            classes: self.entourage.classes(),
        }
    }

    /// `X_U`: the same space with coarse structure generated by `u`.
    pub fn restrict_entourage(&self, u: &Relation) -> Result<GbcSpace, SpaceError> {
        if let Some((x, y)) = u.difference(&self.entourage)?.pairs().next() {
            return Err(SpaceError::NotAnEntourage(
                self.carrier.name(x).to_string(),
                self.carrier.name(y).to_string(),
            ));
        }
        if let Some((g, (x, y))) = self.action.as_ref().and_then(|a| a.relation_violation(u)) {
            return Err(SpaceError::NonInvariantGenerator {
                generator: g,
                structure: "entourage",
                witness: format!("({}, {})", self.carrier.name(x), self.carrier.name(y)),
            });
        }
        let closed = Relation::equivalence_closure(&self.carrier, std::slice::from_ref(u))?;
        GbcSpace::from_normal_form(closed, self.bounded.clone(), self.action.clone())
    }

    /// The subspace on `set`, with its inclusion map.
    pub fn subspace(&self, set: &PointSet) -> Result<(GbcSpace, PointMap), SpaceError> {
        let sub = Carrier::new(set.names())?;
        let inclusion = PointMap::inclusion(&sub, set)?;
        let action = match &self.action {
            None => None,
            Some(a) => {
                if let Some((g, x)) = a.set_violation(set) {
                    return Err(SpaceError::NonInvariantGenerator {
                        generator: g,
                        structure: "subset",
                        witness: self.carrier.name(x).to_string(),
                    });
                }
                let gens = a
                    .generators()
                    .iter()
                    .map(|g| {
                        set.iter()
                            .map(|x| sub.require(self.carrier.name(g.apply(x))).expect("invariant subset"))
                            .collect()
                    })
                    .collect();
                Some(GroupAction::new(&sub, gens)?)
            }
        };
        let space = pullback_structure(&inclusion, self, action)?;
        Ok((space, inclusion))
    }

    /// `X ≅ X_b ⨿ X_h` with both comparison morphisms.
    pub fn split(self: &Arc<Self>) -> Result<Split, SpaceError> {
        let (bounded_part, inc_b) = self.subspace(&self.bounded)?;
        let (unbounded_part, inc_h) = self.subspace(&self.unbounded())?;
        let bounded_part = Arc::new(bounded_part);
        let unbounded_part = Arc::new(unbounded_part);
        let coproduct = crate::limits::coproduct(&[bounded_part.clone(), unbounded_part.clone()]);
        let apex = coproduct.apex.clone();
        // Injection legs give the map out of the coproduct; the inverse sends
        // each point to its own summand.
        let mut back = vec![0; apex.len()];
        let mut forth = vec![0; self.len()];
        for (leg, inc) in coproduct.legs.iter().zip([&inc_b, &inc_h]) {
            for x in 0..inc.dom().len() {
                back[leg.map().apply(x)] = inc.apply(x);
                forth[inc.apply(x)] = leg.map().apply(x);
            }
        }
        let from_map = PointMap::new(apex.carrier(), &self.carrier, back)?;
        let to_map = PointMap::new(&self.carrier, apex.carrier(), forth)?;
        let from_coproduct = validate_morphism(&apex, self, from_map).map_err(violation_error)?;
        let to_coproduct = validate_morphism(self, &apex, to_map).map_err(violation_error)?;
        Ok(Split {
            bounded_part,
            unbounded_part,
            coproduct: apex,
            to_coproduct,
            from_coproduct,
        })
    }
}

fn violation_error(v: Vec<Violation>) -> SpaceError {
    // Only reachable if the split construction itself were wrong.
    panic!("split comparison map failed validation: {v:?}")
}

fn incompatibility(entourage: &Relation, bounded: &PointSet) -> Option<SpaceError> {
    let carrier = entourage.carrier();
    for b in bounded.iter() {
        let class = entourage.successors(b);
        let escaping = class.iter().find(|&x| !bounded.contains(x));
        if let Some(x) = escaping {
            return Some(SpaceError::IncompatibleStructures {
                class: class.names(),
                bounded: carrier.name(b).to_string(),
                escaping: carrier.name(x).to_string(),
            });
        }
    }
    None
}

/// The pullback structure along `map: Y → X`: `E_Y = (f×f)⁻¹(E_X)` and
/// `Y_b = f⁻¹(X_b)`. The map then validates as a morphism `Y → X`.
pub fn pullback_structure(
    map: &PointMap,
    target: &GbcSpace,
    action: Option<GroupAction>,
) -> Result<GbcSpace, SpaceError> {
    let entourage = target.entourage.preimage(map)?;
    let bounded = map.preimage_set(&target.bounded)?;
    if let Some((g, x)) = equivariance_violation(map, action.as_ref(), target.action()) {
        return Err(SpaceError::NonInvariantGenerator {
            generator: g,
            structure: "pullback map",
            witness: map.dom().name(x).to_string(),
        });
    }
    GbcSpace::from_normal_form(entourage, bounded, action)
}

/// The tensor product `X ⊗ Y`: product entourages and rectangle-bounded sets.
pub fn tensor(x: &GbcSpace, y: &GbcSpace) -> GbcSpace {
    let tuples: Vec<Vec<usize>> = (0..x.len())
        .flat_map(|i| (0..y.len()).map(move |j| vec![i, j]))
        .collect();
    let names: Vec<String> = tuples
        .iter()
        .map(|t| tuple_name(&[x.carrier.name(t[0]), y.carrier.name(t[1])]))
        .collect();
    let carrier = Carrier::new(names).expect("tuple names are injective");
    let entourage = Relation::from_pairs(
        &carrier,
        (0..tuples.len())
            .flat_map(|a| (0..tuples.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| {
                x.entourage.contains(tuples[a][0], tuples[b][0]) && y.entourage.contains(tuples[a][1], tuples[b][1])
            }),
    );
    let bounded = PointSet::from_indices(
        &carrier,
        (0..tuples.len()).filter(|&k| x.bounded.contains(tuples[k][0]) && y.bounded.contains(tuples[k][1])),
    );
    let action = componentwise_action(&carrier, &tuples, &[&x.carrier, &y.carrier], &[x.action(), y.action()]);
    GbcSpace::trusted(entourage, bounded, action)
}
