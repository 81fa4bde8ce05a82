//! The combinatorial coefficients S, T, U and V that relate invariants for
//! two weak stability conditions.

mod identities;
mod lie;
mod s;
mod trees;
mod u;

use thiserror::Error;

use crate::stability_core::StabilityError;

pub use identities::{inversion_sums, s_composition, t_composition, u_composition};
pub use lie::{u_word_sum, MultilinearWordSum};
pub use s::{s_coeff, s_coeff_alt, s_dominant_closed_form, s_inverse_dominant_closed_form, t_coeff};
pub use trees::{enumerate_trees, Digraph, TreeMode};
pub use u::{u_coeff, u_diagonal, u_dominant_closed_form, v_coeff};

#[derive(Debug, Error)]
pub enum CoeffError {
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error("quadruple is not dominant")]
    NotDominant,
    #[error("graph is not a tree")]
    NotATree,
    #[error("word is not multilinear: {0}")]
    NotMultilinear(String),
    #[error("{0}")]
    Shape(String),
}
