//! Symbolic spaces on the natural numbers: a closed catalog of bornologies
//! and coarse structures, eventually affine maps, ultimately periodic sets,
//! identity pushouts and the colimit-admissibility criterion.

use std::sync::Arc;

use thiserror::Error;

use crate::finite_space::{validate_morphism, Morphism};
use crate::limits::{Diagram, LimitError};

mod admissible;
pub mod fixtures;
mod map;
mod semilinear;
mod space;

pub use admissible::{
    set_colimit, sym_admissible, ChainStep, SetColimit, SymAdmissibility, SymWitness, MAX_SYM_STATES,
};
pub use map::SymMap;
pub use semilinear::SemilinearSet;
pub use space::{
    sym_identity_colimit, sym_pushout, truncate_map, truncate_space, validate_sym_morphism, Born, Coarse, SymDiagram,
    SymMorphismVerdict, SymSpace,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("incompatible symbolic structures {0}")]
    Incompatible(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("arrow {arrow} is not a morphism: {}", reasons.join("; "))]
    InvalidArrow { arrow: usize, reasons: Vec<String> },
    #[error("duplicate diagram object `{0}`")]
    DuplicateObject(String),
    #[error("arrow {0} refers to a missing object")]
    UnknownObject(usize),
    #[error("unsupported diagram: {0}")]
    UnsupportedDiagram(String),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("more than {cap} {what}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error(transparent)]
    Limit(#[from] LimitError),
}

/// Restricts every object to `{0, ..., n}`; fails when an arrow leaves that range.
pub fn truncate_diagram(d: &SymDiagram, n: u64) -> Result<Diagram, SymError> {
    let objects: Vec<(String, Arc<_>)> = d
        .names()
        .iter()
        .cloned()
        .zip(d.objects().iter().map(|o| Arc::new(truncate_space(o, n))))
        .collect();
    let mut arrows: Vec<(usize, usize, Morphism)> = Vec::new();
    for (i, (s, t, f)) in d.arrows().iter().enumerate() {
        let map =
            truncate_map(f, n).ok_or_else(|| SymError::UnsupportedCombination(format!("arrow {i} leaves [0, {n}]")))?;
        let morphism = validate_morphism(&objects[*s].1, &objects[*t].1, map).map_err(|v| SymError::InvalidArrow {
            arrow: i,
            reasons: v.iter().map(|v| v.to_string()).collect(),
        })?;
        arrows.push((*s, *t, morphism));
    }
    Ok(Diagram::new(objects, arrows)?)
}
