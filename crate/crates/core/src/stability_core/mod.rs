//! Lattice classes, weak stability conditions, posets and A-data.

mod adata;
mod kclass;
mod poset;
mod stability;

pub use adata::{adata_predicates, enumerate_decompositions, prefix_exceeds_suffix, prefix_exceeds_total, ADataPredicates, ADatum};
pub use kclass::{Cone, KClass};
pub use poset::{is_dominant, Poset};
pub use stability::{TauValue, WeakStability};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilityError {
    #[error("class {0} is not in the positive cone")]
    NotInCone(KClass),
    #[error("lattice dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank function is not positive on {0}")]
    NonPositiveRank(KClass),
    #[error("map is not surjective")]
    NonSurjective,
    #[error("invalid partial order: {0}")]
    InvalidPoset(String),
    #[error("this lattice has infinitely many decompositions; use a bounded enumerator")]
    InfiniteDecomposition,
    #[error("A-data must have at least one part")]
    EmptyDatum,
    #[error("parse error: {0}")]
    Parse(String),
}
