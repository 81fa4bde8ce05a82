//! Twisted invariant algebra over a lattice with an Euler form: conversions
//! between I_ss and J, configuration products, and wall-crossing transforms.

mod pairing;
mod table;
mod transforms;

use thiserror::Error;

use crate::coefficients::CoeffError;
use crate::stability_core::{KClass, StabilityError};

pub use pairing::{AntisymmetrizedPairing, EulerPairing};
pub use table::{Flavor, InvariantTable};
pub use transforms::{
    iss_config, iss_from_j, j_from_iss, transform_table, wallcross_config, wallcross_iss, wallcross_j, wallcross_j_omega, ConeEnumerator,
    Enumerator, TreeSumMode, CONFIG_MAX_POINTS, CONFIG_MAX_TARGET,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("no table entry for class {0}")]
    MissingEntry(KClass),
    #[error("value for class {0} has a pole at ℓ = 1")]
    NotInLambdaZero(KClass),
    #[error("bad pairing: {0}")]
    Pairing(String),
    #[error("{0}")]
    Shape(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}
