use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::stability_core::KClass;

/// Integer bilinear form `χ(α, β) = αᵀ M β` on a lattice with a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerPairing {
    matrix: Vec<Vec<i64>>,
}

impl EulerPairing {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self, EngineError> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(EngineError::Pairing("matrix is not square".into()));
        }
        Ok(EulerPairing { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn eval(&self, a: &KClass, b: &KClass) -> i64 {
        let mut s = 0;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                s += a.0[i] * m * b.0[j];
            }
        }
        s
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// `χ̄(α, β) = χ(α, β) - χ(β, α)`.
    pub fn antisymmetrized(&self) -> AntisymmetrizedPairing {
        let n = self.dim();
        let matrix = (0..n).map(|i| (0..n).map(|j| self.matrix[i][j] - self.matrix[j][i]).collect()).collect();
        AntisymmetrizedPairing { matrix }
    }

    /// `ℓ`-exponent `-Σ_{i<j} χ(κ(j), κ(i))` attached to an ordered product.
    pub fn twist(&self, parts: &[KClass]) -> i64 {
        let mut s = 0;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                s -= self.eval(&parts[j], &parts[i]);
            }
        }
        s
    }
}

/// Antisymmetric integer form χ̄.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntisymmetrizedPairing {
    matrix: Vec<Vec<i64>>,
}

impl AntisymmetrizedPairing {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self, EngineError> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(EngineError::Pairing("matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j] != -matrix[j][i] {
                    return Err(EngineError::Pairing(format!("entries ({i},{j}) and ({j},{i}) are not opposite")));
                }
            }
        }
        Ok(AntisymmetrizedPairing { matrix })
    }

    pub fn eval(&self, a: &KClass, b: &KClass) -> i64 {
        let mut s = 0;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                s += a.0[i] * m * b.0[j];
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_form() {
        let chi = EulerPairing::new(vec![vec![1, -2], vec![0, 1]]).unwrap();
        let (e1, e2) = (KClass::from([1, 0]), KClass::from([0, 1]));
        assert_eq!(chi.eval(&e1, &e2), -2);
        assert_eq!(chi.eval(&e2, &e1), 0);
        assert!(!chi.is_symmetric());
        let bar = chi.antisymmetrized();
        assert_eq!(bar.eval(&e1, &e2), -2);
        assert_eq!(bar.eval(&e2, &e1), 2);
        assert_eq!(chi.twist(&[e1.clone(), e2.clone()]), 0);
        assert_eq!(chi.twist(&[e2, e1]), 2);
    }

    #[test]
    fn rejects_non_antisymmetric() {
        assert!(AntisymmetrizedPairing::new(vec![vec![1]]).is_err());
        assert!(EulerPairing::new(vec![vec![1, 2]]).is_err());
    }
}
