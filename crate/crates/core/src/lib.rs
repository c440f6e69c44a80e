//! Finite generalized bornological coarse spaces: normal forms, morphisms,
//! limits and colimits with a universal-property oracle, coarse-homotopy
//! predicates, and a symbolic tier over the natural numbers.

pub mod coarse_homotopy;
pub mod commands;
pub mod document;
pub mod finite_space;
pub mod limits;
mod naming;
pub mod relalg;
pub mod symnat;
