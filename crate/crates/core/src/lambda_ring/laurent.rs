use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::Q;

/// Finite Laurent polynomial `sum c_k x^k`, `k` ranging over all integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, Q>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Q::one(), 0)
    }

    pub fn monomial(c: Q, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentPolynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(it: I) -> Self {
        let mut out = LaurentPolynomial::zero();
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    /// `x^shift * p(x)`.
    pub fn from_poly(p: &Poly, shift: i64) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| (i as i64 + shift, c.clone())))
    }

    pub fn add_term(&mut self, k: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, Q> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> Q {
        self.terms.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Decompose as `x^shift * p(x)` with `p(0) != 0` (shift 0 for zero).
    pub fn to_poly_shift(&self) -> (Poly, i64) {
        let Some(lo) = self.min_exp() else {
            return (Poly::zero(), 0);
        };
        let hi = self.max_exp().unwrap_or(lo);
        let coeffs = (lo..=hi).map(|k| self.coeff(k)).collect();
        (Poly::from_coeffs(coeffs), lo)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPolynomial { terms: self.terms.iter().map(|(k, v)| (k + by, v.clone())).collect() }
    }

    /// Evaluate at a nonzero point (or any point when all exponents are nonnegative).
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let mut acc = Q::zero();
        for (k, c) in &self.terms {
            if *k < 0 && x.is_zero() {
                return None;
            }
            let p = if *k >= 0 { num_traits::pow(x.clone(), *k as usize) } else { num_traits::pow(x.recip(), (-*k) as usize) };
            acc += c * p;
        }
        Some(acc)
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let a = LaurentPolynomial::from_terms([(-1, Q::one()), (2, Q::one())]);
        let b = LaurentPolynomial::monomial(-Q::one(), 2);
        let s = &a + &b;
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s, LaurentPolynomial::monomial(Q::one(), -1));
    }

    #[test]
    fn poly_shift_round_trip() {
        let a = LaurentPolynomial::from_terms([(-3, Q::one()), (0, Q::from_integer(5.into()))]);
        let (p, s) = a.to_poly_shift();
        assert_eq!(s, -3);
        assert_eq!(LaurentPolynomial::from_poly(&p, s), a);
    }
}
