use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Q;

/// Dense univariate polynomial over Q, coefficients stored from degree 0 upward.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly::monomial(Q::one(), 1)
    }

    pub fn monomial(c: Q, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| Q::from_integer(c.into())).collect())
    }

    /// `x^k - 1`.
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[0] = -Q::one();
        coeffs[k] += Q::one();
        Poly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    /// Multiplicity of the root 0.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divide by `x^k`; the caller guarantees `k <= valuation`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(k <= self.valuation() || self.is_zero());
        Poly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.lead().recip();
        self.scale(&inv)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `x -> x^k`.
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly { coeffs }
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lead_inv = d.lead().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut a = a.monic();
        let mut b = b.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Split off the rational content: returns `(c, p)` with `self = c * p`, `p`
    /// primitive with integer coefficients and positive leading coefficient.
    pub fn content_split(&self) -> (Q, Poly) {
        if self.is_zero() {
            return (Q::zero(), Poly::zero());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for c in &self.coeffs {
            num = num.gcd(&(c.numer() * &den / c.denom()));
        }
        let mut content = Q::new(num, den);
        if self.lead().is_negative() {
            content = -content;
        }
        (content.clone(), self.scale(&content.recip()))
    }

    /// Render with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}{mono}"));
            }
        }
        out
    }
}

/// The d-th cyclotomic polynomial, by exact division of `x^d - 1`.
pub fn cyclotomic(d: usize) -> Poly {
    assert!(d >= 1);
    let mut p = Poly::x_pow_minus_one(d);
    for e in 1..d {
        if d % e == 0 {
            p = p.div_exact(&cyclotomic(e)).expect("cyclotomic divisor");
        }
    }
    p
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn division_round_trip() {
        let a = Poly::from_ints(&[3, 0, -2, 5, 1]);
        let d = Poly::from_ints(&[1, 2, 1]);
        let (quo, rem) = a.div_rem(&d);
        assert_eq!(&(&quo * &d) + &rem, a);
        assert!(rem.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = Poly::from_ints(&[-1, 1]);
        let a = &Poly::from_ints(&[1, 1]) * &f;
        let b = &Poly::from_ints(&[2, 0, 3]) * &f.scale(&q(4));
        assert_eq!(Poly::gcd(&a, &b), f);
    }

    #[test]
    fn cyclotomics_multiply_to_x_pow_minus_one() {
        for d in 1..=12usize {
            let mut prod = Poly::one();
            for e in (1..=d).filter(|e| d % e == 0) {
                prod = &prod * &cyclotomic(e);
            }
            assert_eq!(prod, Poly::x_pow_minus_one(d));
        }
        assert_eq!(cyclotomic(6), Poly::from_ints(&[1, -1, 1]));
    }

    #[test]
    fn content_split_normalizes_sign() {
        let p = Poly::from_coeffs(vec![Q::new((-1).into(), 2.into()), Q::new((-3).into(), 4.into())]);
        let (c, prim) = p.content_split();
        assert_eq!(c, Q::new((-1).into(), 4.into()));
        assert_eq!(prim, Poly::from_ints(&[2, 3]));
    }

    #[test]
    fn render_descending() {
        assert_eq!(Poly::from_ints(&[1, -1, 2]).render("z"), "2z^2-z+1");
        assert_eq!(Poly::from_ints(&[-1, 1]).render("ℓ"), "ℓ-1");
    }
}
