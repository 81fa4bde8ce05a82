//! Exact arithmetic in Λ = Q[ℓ, ℓ⁻¹, (ℓ^k - 1)⁻¹], its subring Λ° and the
//! specialization π: Λ° → Q at ℓ = 1, plus truncated Laurent series in z with
//! ℓ = z².

mod element;
mod laurent;
mod poly;
mod series;

pub use element::{LambdaElement, OmegaValue};
pub use laurent::LaurentPolynomial;
pub use poly::{cyclotomic, Poly};
pub use series::{expand_series, TruncatedSeries};

use thiserror::Error;

pub type Q = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("result has denominator {0}, which is not a product of ℓ and ℓ^k-1 factors")]
    NotInLambda(String),
    #[error("pole at ℓ = {0}")]
    Pole(Q),
    #[error("{0} is not in Λ°: its denominator vanishes at ℓ = 1")]
    NotInLambdaZero(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Integer as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// `n / d` as an exact rational.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
