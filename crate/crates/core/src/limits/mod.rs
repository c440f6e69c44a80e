//! Limits and colimits of finite diagrams, plus the brute-force
//! universal-property oracle used to check them.

mod classical;
mod construct;
mod diagram;
pub mod mutate;
mod oracle;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use classical::{
    admissible, exists_in_classical, preservation_test, AdmissibilityReport, AdmissibilityWitness, ClassicalExistence,
    Preservation,
};
pub use construct::{
    coequalizer, colimit, coproduct, equalizer, limit, limit_with_cap, product, pullback, pushout,
    DEFAULT_MAX_LIMIT_POINTS,
};
pub use diagram::{Arrow, Diagram};
pub use oracle::{universal_property_check, Counterexample, Verdict, MAX_TEST_CAP};

use crate::finite_space::{GbcSpace, Morphism, SpaceError};
use crate::relalg::RelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Limit,
    Colimit,
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "limit" => Ok(Side::Limit),
            "colimit" => Ok(Side::Colimit),
            other => Err(format!("unknown side `{other}` (expected limit or colimit)")),
        }
    }
}

/// A cone (legs out of the apex) or cocone (legs into the apex), one leg
/// per diagram object in order.
#[derive(Clone, Debug)]
pub struct Cone {
    pub apex: Arc<GbcSpace>,
    pub legs: Vec<Morphism>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error("duplicate diagram object `{0}`")]
    DuplicateObject(String),
    #[error("arrow {arrow} refers to object {object}, which does not exist")]
    UnknownObject { arrow: usize, object: usize },
    #[error("arrow {arrow}: morphism {which} does not match the labelled object")]
    ArrowMismatch { arrow: usize, which: &'static str },
    #[error("arrow {0} is not equivariant")]
    NotEquivariant(usize),
    #[error("morphisms are not parallel")]
    NotParallel,
    #[error("morphisms do not share a {0}")]
    NotASpan(&'static str),
    #[error("object `{0}` is not classical (it has unbounded points)")]
    NonClassicalInput(String),
    #[error("the classical {0:?} does not exist")]
    NoClassicalObject(Side),
    #[error("{what} of size {requested} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
}
