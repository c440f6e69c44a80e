use std::sync::Arc;

use serde::Serialize;

use super::action::equivariance_violation;
use super::GbcSpace;
use crate::relalg::{PointMap, RelError};

/// A validated proper and controlled map between finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    dom: Arc<GbcSpace>,
    cod: Arc<GbcSpace>,
    map: PointMap,
    equivariant: bool,
}

/// Why a map fails to be a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    CarrierMismatch,
    /// `f(preimage_point) = bounded_point` is bounded but `preimage_point` is not.
    NotProper {
        bounded_point: String,
        preimage_point: String,
    },
    /// `pair` lies in the domain entourage, `image` outside the codomain's.
    NotControlled {
        pair: (String, String),
        image: (String, String),
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::CarrierMismatch => write!(f, "map carriers do not match the spaces"),
            Violation::NotProper {
                bounded_point,
                preimage_point,
            } => write!(
                f,
                "not proper: unbounded `{preimage_point}` maps to bounded `{bounded_point}`"
            ),
            Violation::NotControlled { pair, image } => write!(
                f,
                "not controlled: ({}, {}) maps to ({}, {})",
                pair.0, pair.1, image.0, image.1
            ),
        }
    }
}

/// Checks properness and controlledness, returning every violation.
///
/// Equivariance is recorded on the result rather than required.
pub fn validate_morphism(dom: &Arc<GbcSpace>, cod: &Arc<GbcSpace>, map: PointMap) -> Result<Morphism, Vec<Violation>> {
    if map.dom() != dom.carrier() || map.cod() != cod.carrier() {
        return Err(vec![Violation::CarrierMismatch]);
    }
    let mut violations = Vec::new();
    for x in 0..dom.len() {
        let y = map.apply(x);
        if cod.bounded().contains(y) && !dom.bounded().contains(x) {
            violations.push(Violation::NotProper {
                bounded_point: cod.carrier().name(y).to_string(),
                preimage_point: dom.carrier().name(x).to_string(),
            });
        }
    }
    for (x, x2) in dom.entourage().pairs() {
        let (y, y2) = (map.apply(x), map.apply(x2));
        if !cod.entourage().contains(y, y2) {
            violations.push(Violation::NotControlled {
                pair: (dom.carrier().name(x).into(), dom.carrier().name(x2).into()),
                image: (cod.carrier().name(y).into(), cod.carrier().name(y2).into()),
            });
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    let equivariant = equivariance_violation(&map, dom.action(), cod.action()).is_none();
    Ok(Morphism {
        dom: dom.clone(),
        cod: cod.clone(),
        map,
        equivariant,
    })
}

/// Fast yes/no version of [`validate_morphism`] for search loops.
pub(crate) fn is_morphism(dom: &GbcSpace, cod: &GbcSpace, map: &PointMap) -> bool {
    let reps = class_representatives(dom);
    (0..dom.len()).all(|x| {
        let y = map.apply(x);
        (dom.bounded().contains(x) || !cod.bounded().contains(y)) && cod.entourage().contains(y, map.apply(reps[x]))
    })
}

/// Least member of each point's entourage class.
pub(crate) fn class_representatives(space: &GbcSpace) -> Vec<usize> {
    let mut reps = vec![usize::MAX; space.len()];
    for class in space.entourage().classes() {
        let least = class.first().expect("classes are nonempty");
        for x in class.iter() {
            reps[x] = least;
        }
    }
    reps
}

impl Morphism {
    /// Wraps a map already known to be an equivariant morphism.
    pub(crate) fn trusted(dom: Arc<GbcSpace>, cod: Arc<GbcSpace>, map: PointMap) -> Self {
        debug_assert!(is_morphism(&dom, &cod, &map));
        Morphism {
            dom,
            cod,
            map,
            equivariant: true,
        }
    }

    pub fn identity(space: &Arc<GbcSpace>) -> Self {
        Morphism::trusted(space.clone(), space.clone(), PointMap::identity(space.carrier()))
    }

    pub fn dom(&self) -> &Arc<GbcSpace> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<GbcSpace> {
        &self.cod
    }

    pub fn map(&self) -> &PointMap {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map.apply(x)
    }

    pub fn is_equivariant(&self) -> bool {
        self.equivariant
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism, RelError> {
        if *self.cod != *next.dom {
            return Err(RelError::CarrierMismatch);
        }
        Ok(Morphism {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            map: self.map.then(&next.map)?,
            equivariant: self.equivariant && next.equivariant,
        })
    }
}
