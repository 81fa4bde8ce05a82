//! Coherent sheaves on a smooth projective curve of genus `g`: closed-form
//! purity invariants, the Harder-Narasimhan rank recursion for Gieseker
//! invariants, and Poincaré polynomials of coprime moduli spaces.

mod gamma;

use num_integer::Integer;
use thiserror::Error;

use crate::lambda_ring::{Poly, TruncatedSeries, Q};

pub use gamma::{coprime_poincare, degree_tuples, iss_gamma, iss_gamma_direct, reconstruct_delta, CurveEngine, GammaPath, TupleRule};

/// Default retained z-exponent for curve series.
pub const DEFAULT_FLOOR: i64 = -20;
/// Default number of vanishing coefficients that certifies a terminating residue.
pub const DEFAULT_GUARD: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("classes live on curves of different genus ({0} and {1})")]
    GenusMismatch(i64, i64),
    #[error("({n},{d}) is not a positive class: need n >= 0, and d > 0 when n = 0")]
    NotPositive { n: i64, d: i64 },
    #[error("rank must be at least 1, got {0}")]
    BadRank(i64),
    #[error("genus must be nonnegative, got {0}")]
    BadGenus(i64),
    #[error("rank {n} and degree {d} are not coprime")]
    NotCoprime { n: i64, d: i64 },
    #[error("residue does not terminate within the guard band: {0}")]
    GuardBand(String),
    #[error("precision bookkeeping failed: {0}")]
    Precision(String),
}

/// A class `(n, d)` = (rank, degree) on a genus `g` curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass {
    pub n: i64,
    pub d: i64,
    pub genus: i64,
}

impl CurveClass {
    pub fn new(n: i64, d: i64, genus: i64) -> Result<Self, CurveError> {
        if genus < 0 {
            return Err(CurveError::BadGenus(genus));
        }
        if n < 0 || (n == 0 && d <= 0) {
            return Err(CurveError::NotPositive { n, d });
        }
        Ok(CurveClass { n, d, genus })
    }
}

/// `χ((n1,d1),(n2,d2)) = n1 d2 - d1 n2 - (g-1) n1 n2`.
pub fn curve_chi(x: &CurveClass, y: &CurveClass) -> Result<i64, CurveError> {
    if x.genus != y.genus {
        return Err(CurveError::GenusMismatch(x.genus, y.genus));
    }
    Ok(x.n * y.d - x.d * y.n - (x.genus - 1) * x.n * y.n)
}

fn check_rank_genus(n: i64, g: i64) -> Result<(), CurveError> {
    if n < 1 {
        return Err(CurveError::BadRank(n));
    }
    if g < 0 {
        return Err(CurveError::BadGenus(g));
    }
    Ok(())
}

/// `(z^k + 1)` as a polynomial in `z`.
fn z_pow_plus_one(k: usize) -> Poly {
    let mut c = vec![0i64; k + 1];
    c[0] = 1;
    c[k] = 1;
    Poly::from_ints(&c)
}

/// Numerator and denominator of the closed form for the purity invariant in rank `n`.
pub fn iss_delta_fraction(n: i64, g: i64) -> (Poly, Poly) {
    let n = n as usize;
    let mut num = Poly::one();
    let mut den = Poly::one();
    for k in 1..=n {
        num = &num * &z_pow_plus_one(2 * k - 1).pow(2 * g as usize);
    }
    for k in 1..n {
        den = &den * &Poly::x_pow_minus_one(2 * k).pow(2);
    }
    den = &den * &Poly::x_pow_minus_one(2 * n);
    (num, den)
}

/// Purity invariant of rank `n` (any degree) as a series in `z^{-1}` down to `floor`.
pub fn iss_delta(n: i64, _d: i64, g: i64, floor: i64) -> Result<TruncatedSeries, CurveError> {
    check_rank_genus(n, g)?;
    let (num, den) = iss_delta_fraction(n, g);
    Ok(TruncatedSeries::from_z_poly(&num).div_poly(&den, floor))
}

/// `P(C^(m); z) = Σ_{j<=min(m,2g)} C(2g, j) z^j Σ_{i<=m-j} z^{2i}`, the Poincaré
/// polynomial of the `m`-th symmetric power of the curve.
pub fn symmetric_power_poincare(m: usize, g: i64) -> Poly {
    let two_g = 2 * g as usize;
    let mut coeffs = vec![Q::from_integer(0.into()); 2 * m + 1];
    let mut binom = num_bigint::BigInt::from(1);
    for j in 0..=m.min(two_g) {
        for i in 0..=(m - j) {
            coeffs[j + 2 * i] += Q::from_integer(binom.clone());
        }
        binom = binom * (two_g - j) / (j + 1);
    }
    Poly::from_coeffs(coeffs)
}

/// Purity invariant through the sum over `m_2, .., m_n >= 0` of
/// `ℓ^((n²-1)(g-1) - Σ a m_a) Π P(C^(m_a))`, times `(1+z)^{2g}/(z²-1)`.
pub fn iss_delta_symmetric_powers(n: i64, g: i64, floor: i64) -> Result<TruncatedSeries, CurveError> {
    check_rank_genus(n, g)?;
    let base = 2 * (n * n - 1) * (g - 1);
    // The prefactor has top degree 2g - 2; each m_a lowers the top by 2(a-1)m_a.
    let prefactor_top = 2 * g - 2;
    let budget = base + prefactor_top - floor;
    let mut sum = TruncatedSeries::zero_exact();
    let mut ms = vec![0i64; (n as usize).saturating_sub(1)];
    loop {
        let drop: i64 = ms.iter().enumerate().map(|(i, &m)| 2 * (i as i64 + 1) * m).sum();
        if drop <= budget {
            let mut term = Poly::one();
            for &m in &ms {
                term = &term * &symmetric_power_poincare(m as usize, g);
            }
            let shift: i64 = base - ms.iter().enumerate().map(|(i, &m)| 2 * (i as i64 + 2) * m).sum::<i64>();
            sum = &sum + &TruncatedSeries::from_z_poly(&term).shift(shift);
        }
        // Odometer over m_a with the budget as a cutoff.
        let mut i = 0;
        loop {
            if i == ms.len() {
                let pre = TruncatedSeries::from_z_poly(&z_pow_plus_one(1).pow(2 * g as usize));
                let series = &pre * &sum.truncate(floor - prefactor_top);
                return Ok(series.div_poly(&Poly::x_pow_minus_one(2), floor).truncate(floor));
            }
            ms[i] += 1;
            let drop: i64 = ms.iter().enumerate().map(|(j, &m)| 2 * (j as i64 + 1) * m).sum();
            if drop <= budget {
                break;
            }
            ms[i] = 0;
            i += 1;
        }
    }
}

/// `gcd(n, d) == 1`.
pub fn coprime(n: i64, d: i64) -> bool {
    n.gcd(&d) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_ring::qi;

    #[test]
    fn chi_examples() {
        let g2 = |n, d| CurveClass::new(n, d, 2).unwrap();
        assert_eq!(curve_chi(&g2(1, 0), &g2(1, 0)).unwrap(), -1);
        assert_eq!(curve_chi(&g2(3, 5), &g2(3, 5)).unwrap(), -9);
        let g0 = |n, d| CurveClass::new(n, d, 0).unwrap();
        assert_eq!(curve_chi(&g0(1, 1), &g0(1, 0)).unwrap(), 0);
        assert_eq!(curve_chi(&g2(1, 0), &CurveClass::new(1, 0, 1).unwrap()), Err(CurveError::GenusMismatch(2, 1)));
        assert!(CurveClass::new(0, 0, 2).is_err());
        assert!(CurveClass::new(0, 2, 2).is_ok());
    }

    #[test]
    fn rank_one_genus_two() {
        let s = iss_delta(1, 0, 2, -3).unwrap();
        for (k, c) in [(2, 1), (1, 4), (0, 7), (-1, 8), (-2, 8), (-3, 8)] {
            assert_eq!(s.coeff(k), qi(c), "z^{k}");
        }
        // Multiplying back by z²-1 recovers (z+1)^4 above the floor.
        let back = &s * &TruncatedSeries::from_z_poly(&Poly::x_pow_minus_one(2));
        assert!(back.agrees_to(&TruncatedSeries::from_z_poly(&z_pow_plus_one(1).pow(4)), back.floor().unwrap()));
    }

    #[test]
    fn rank_one_genus_zero() {
        let s = iss_delta(1, 5, 0, -8).unwrap();
        assert_eq!(s.terms().len(), 4);
        assert!((1..=4).all(|k| s.coeff(-2 * k) == qi(1)));
    }

    #[test]
    fn degree_independence() {
        for d in -3..=3 {
            assert_eq!(iss_delta(2, d, 2, -12).unwrap(), iss_delta(2, 0, 2, -12).unwrap());
        }
    }

    #[test]
    fn closed_form_matches_symmetric_powers() {
        for g in 0..=3 {
            for n in 1..=3 {
                let f = -16;
                let a = iss_delta(n, 0, g, f).unwrap();
                let b = iss_delta_symmetric_powers(n, g, f).unwrap();
                assert!(a.agrees_to(&b, f), "n={n} g={g}\n{}\n{}", a.render(), b.render());
            }
        }
    }

    #[test]
    fn symmetric_power_examples() {
        // P(C^(1)) = 1 + 2g z + z^2.
        assert_eq!(symmetric_power_poincare(1, 2), Poly::from_ints(&[1, 4, 1]));
        assert_eq!(symmetric_power_poincare(0, 5), Poly::one());
        // The symmetric square of an elliptic curve has Betti numbers 1, 2, 2, 2, 1.
        assert_eq!(symmetric_power_poincare(2, 1), Poly::from_ints(&[1, 2, 2, 2, 1]));
    }

    #[test]
    fn top_degree_of_delta() {
        for g in 0..=3 {
            for n in 1..=3 {
                let s = iss_delta(n, 0, g, -30).unwrap();
                assert_eq!(s.top_degree(), Some(2 * (g - 1) * n * n));
            }
        }
    }
}
