use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

/// Element of the numerical lattice K(A), written in a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KClass(pub Vec<i64>);

impl KClass {
    pub fn new(coords: Vec<i64>) -> Self {
        KClass(coords)
    }

    pub fn zero(dim: usize) -> Self {
        KClass(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Sum of a nonempty slice of classes.
    pub fn sum(parts: &[KClass]) -> KClass {
        let dim = parts.first().map_or(0, |p| p.dim());
        parts.iter().fold(KClass::zero(dim), |acc, p| &acc + p)
    }

    pub fn dot(&self, v: &[i64]) -> i64 {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

impl Add for &KClass {
    type Output = KClass;
    fn add(self, rhs: &KClass) -> KClass {
        assert_eq!(self.dim(), rhs.dim(), "lattice dimension mismatch");
        KClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &KClass {
    type Output = KClass;
    fn sub(self, rhs: &KClass) -> KClass {
        assert_eq!(self.dim(), rhs.dim(), "lattice dimension mismatch");
        KClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", inner.join(","))
    }
}

impl From<Vec<i64>> for KClass {
    fn from(v: Vec<i64>) -> Self {
        KClass(v)
    }
}

impl<const N: usize> From<[i64; N]> for KClass {
    fn from(v: [i64; N]) -> Self {
        KClass(v.to_vec())
    }
}

/// Positive cone C(A) of a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cone {
    /// Nonzero vectors with nonnegative entries (quiver dimension vectors).
    Nonnegative,
    /// `(n, d)` with `n >= 0`, and `d > 0` when `n = 0` (sheaves on a curve).
    Curve,
}

impl Cone {
    pub fn contains(&self, a: &KClass) -> bool {
        match self {
            Cone::Nonnegative => !a.is_zero() && a.0.iter().all(|&c| c >= 0),
            Cone::Curve => a.dim() == 2 && (a.0[0] > 0 || (a.0[0] == 0 && a.0[1] > 0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cones() {
        assert!(Cone::Nonnegative.contains(&KClass::from([1, 0])));
        assert!(!Cone::Nonnegative.contains(&KClass::from([0, 0])));
        assert!(!Cone::Nonnegative.contains(&KClass::from([2, -1])));
        assert!(Cone::Curve.contains(&KClass::from([1, -7])));
        assert!(Cone::Curve.contains(&KClass::from([0, 3])));
        assert!(!Cone::Curve.contains(&KClass::from([0, 0])));
        assert!(!Cone::Curve.contains(&KClass::from([0, -1])));
    }

    #[test]
    fn sums_and_display() {
        let s = KClass::sum(&[KClass::from([1, 0]), KClass::from([0, 1]), KClass::from([2, 2])]);
        assert_eq!(s, KClass::from([3, 3]));
        assert_eq!(s.to_string(), "(3,3)");
    }
}
