use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPolynomial;
use super::poly::{cyclotomic, Poly};
use super::{LambdaError, Q};

static CYCLOTOMIC_CACHE: Mutex<Vec<Poly>> = Mutex::new(Vec::new());

/// Cached cyclotomic polynomial; index 0 is unused.
fn phi(d: usize) -> Poly {
    let mut cache = CYCLOTOMIC_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(Poly::zero());
    }
    while cache.len() <= d {
        let next = cache.len();
        cache.push(cyclotomic(next));
    }
    cache[d].clone()
}

/// Multiplicities of cyclotomic factors of a monic polynomial with `p(0) != 0`,
/// or `None` when some irreducible factor is not cyclotomic.
fn cyclotomic_multiplicities(p: &Poly) -> Option<BTreeMap<usize, usize>> {
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    let mut d = 1usize;
    while rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap_or(0);
        if d > 2 * deg * deg + 2 {
            return None;
        }
        let f = phi(d);
        if f.degree().unwrap_or(0) <= deg {
            while let Some(q) = rest.div_exact(&f) {
                rest = q;
                *out.entry(d).or_insert(0) += 1;
            }
        }
        d += 1;
    }
    rest.is_one().then_some(out)
}

/// Exact element of Λ, stored as `ℓ^shift * num(ℓ) / den(ℓ)` in lowest terms.
///
/// `den` is monic, coprime to `num`, has nonzero constant term and is a product
/// of cyclotomic polynomials; `num(0) != 0`. Zero is `0/1` with shift 0, so
/// derived equality is exact equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LambdaJson", into = "LambdaJson")]
pub struct LambdaElement {
    shift: i64,
    num: Poly,
    den: Poly,
}

/// Rational point value in Ω, the image of π.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaValue(pub Q);

impl fmt::Display for OmegaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl LambdaElement {
    pub fn zero() -> Self {
        LambdaElement { shift: 0, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    pub fn rational(c: Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LambdaElement { shift: 0, num: Poly::constant(c), den: Poly::one() }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Q::from_integer(n.into()))
    }

    /// `ℓ^k`.
    pub fn ell_pow(k: i64) -> Self {
        LambdaElement { shift: k, num: Poly::one(), den: Poly::one() }
    }

    /// `(ℓ^k - 1)^e` for any integer `e`.
    pub fn ell_k_minus_one_pow(k: usize, e: i64) -> Self {
        assert!(k >= 1);
        let p = Poly::x_pow_minus_one(k).pow(e.unsigned_abs() as usize);
        if e >= 0 {
            Self::from_poly(&p)
        } else {
            Self::normalize(0, Poly::one(), p)
        }
    }

    pub fn from_poly(p: &Poly) -> Self {
        Self::normalize(0, p.clone(), Poly::one())
    }

    pub fn from_laurent(p: &LaurentPolynomial) -> Self {
        let (poly, shift) = p.to_poly_shift();
        Self::normalize(shift, poly, Poly::one())
    }

    /// `num / prod (ℓ^k - 1)^mult`; always lands in Λ.
    pub fn from_factors(num: &LaurentPolynomial, den: &[(usize, usize)]) -> Self {
        let mut d = Poly::one();
        for &(k, m) in den {
            assert!(k >= 1, "denominator factor ℓ^0 - 1 vanishes");
            d = &d * &Poly::x_pow_minus_one(k).pow(m);
        }
        let (poly, shift) = num.to_poly_shift();
        Self::normalize(shift, poly, d)
    }

    /// `ℓ^shift * num / den` for arbitrary polynomials, checked for membership in Λ.
    pub fn from_fraction(shift: i64, num: Poly, den: Poly) -> Result<Self, LambdaError> {
        if den.is_zero() {
            return Err(LambdaError::DivisionByZero);
        }
        let out = Self::normalize(shift, num, den);
        if cyclotomic_multiplicities(&out.den).is_none() {
            return Err(LambdaError::NotInLambda(out.den.render("ℓ")));
        }
        Ok(out)
    }

    fn normalize(mut shift: i64, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let vn = num.valuation();
        let vd = den.valuation();
        shift += vn as i64 - vd as i64;
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        let g = Poly::gcd(&num, &den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        let lead = den.lead();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        LambdaElement { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    pub fn ell_shift(&self) -> i64 {
        self.shift
    }

    /// Numerator polynomial in lowest terms (without the ℓ-power).
    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Reduced denominator, monic, with no factor of ℓ.
    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// `ℓ^shift * num` as a Laurent polynomial.
    pub fn numerator_laurent(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_poly(&self.num, self.shift)
    }

    /// Is the value a Laurent polynomial in ℓ?
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Degree in ℓ of the rational function (numerator minus denominator), `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        let n = self.num.degree()? as i64;
        Some(self.shift + n - self.den.degree().unwrap_or(0) as i64)
    }

    /// Rewrite as `N(ℓ) / prod (ℓ^k - 1)^mult` with `N` a Laurent polynomial.
    ///
    /// Factors are chosen greedily from the largest cyclotomic index down, so a
    /// lone `(ℓ+1)` in the denominator becomes `(ℓ-1)/(ℓ^2-1)`.
    pub fn denominator_factors(&self) -> (LaurentPolynomial, Vec<(usize, usize)>) {
        let mut mult = cyclotomic_multiplicities(&self.den).expect("denominator is cyclotomic");
        let mut extra = Poly::one();
        let mut factors: BTreeMap<usize, usize> = BTreeMap::new();
        while let Some((&d, _)) = mult.iter().rev().find(|(_, &e)| e > 0) {
            for t in (1..=d).filter(|t| d % t == 0) {
                match mult.get_mut(&t) {
                    Some(e) if *e > 0 => *e -= 1,
                    _ => extra = &extra * &phi(t),
                }
            }
            *factors.entry(d).or_insert(0) += 1;
        }
        let num = LaurentPolynomial::from_poly(&(&self.num * &extra), self.shift);
        (num, factors.into_iter().collect())
    }

    pub fn eval_at(&self, q: &Q) -> Result<Q, LambdaError> {
        if self.is_zero() {
            return Ok(Q::zero());
        }
        let d = self.den.eval(q);
        if d.is_zero() || (q.is_zero() && self.shift < 0) {
            return Err(LambdaError::Pole(q.clone()));
        }
        let p = if self.shift >= 0 {
            num_traits::pow(q.clone(), self.shift as usize)
        } else {
            num_traits::pow(q.recip(), self.shift.unsigned_abs() as usize)
        };
        Ok(self.num.eval(q) * p / d)
    }

    /// Membership in Λ°: no factor `ℓ - 1` in the reduced denominator.
    pub fn in_lambda0(&self) -> bool {
        !self.den.eval(&Q::one()).is_zero()
    }

    /// π: evaluation at ℓ = 1.
    pub fn project_omega(&self) -> Result<OmegaValue, LambdaError> {
        if !self.in_lambda0() {
            return Err(LambdaError::NotInLambdaZero(self.to_string()));
        }
        Ok(OmegaValue(self.eval_at(&Q::one())?))
    }

    pub fn checked_div(&self, rhs: &LambdaElement) -> Result<LambdaElement, LambdaError> {
        if rhs.is_zero() {
            return Err(LambdaError::DivisionByZero);
        }
        let num = &self.num * &rhs.den;
        let den = &self.den * &rhs.num;
        Self::from_fraction(self.shift - rhs.shift, num, den)
    }

    pub fn scale(&self, c: &Q) -> LambdaElement {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        LambdaElement { shift: self.shift, num: self.num.scale(c), den: self.den.clone() }
    }

    /// Multiply by `ℓ^k`.
    pub fn mul_ell_pow(&self, k: i64) -> LambdaElement {
        if self.is_zero() {
            return Self::zero();
        }
        LambdaElement { shift: self.shift + k, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn pow(&self, e: usize) -> LambdaElement {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &LambdaElement {
    type Output = LambdaElement;
    fn add(self, rhs: &LambdaElement) -> LambdaElement {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(rhs.shift);
        let g = Poly::gcd(&self.den, &rhs.den);
        let a_co = rhs.den.div_exact(&g).expect("gcd divides");
        let b_co = self.den.div_exact(&g).expect("gcd divides");
        let a = (&self.num * &a_co).shift_up((self.shift - s) as usize);
        let b = (&rhs.num * &b_co).shift_up((rhs.shift - s) as usize);
        LambdaElement::normalize(s, &a + &b, &self.den * &a_co)
    }
}

impl Sub for &LambdaElement {
    type Output = LambdaElement;
    fn sub(self, rhs: &LambdaElement) -> LambdaElement {
        self + &(-rhs)
    }
}

impl Neg for &LambdaElement {
    type Output = LambdaElement;
    fn neg(self) -> LambdaElement {
        LambdaElement { shift: self.shift, num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &LambdaElement {
    type Output = LambdaElement;
    fn mul(self, rhs: &LambdaElement) -> LambdaElement {
        if self.is_zero() || rhs.is_zero() {
            return LambdaElement::zero();
        }
        LambdaElement::normalize(self.shift + rhs.shift, &self.num * &rhs.num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LambdaElement {
            type Output = LambdaElement;
            fn $m(self, rhs: LambdaElement) -> LambdaElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LambdaElement {
    type Output = LambdaElement;
    fn neg(self) -> LambdaElement {
        -&self
    }
}

impl std::iter::Sum for LambdaElement {
    fn sum<I: Iterator<Item = LambdaElement>>(iter: I) -> Self {
        iter.fold(LambdaElement::zero(), |a, b| &a + &b)
    }
}

impl std::iter::Product for LambdaElement {
    fn product<I: Iterator<Item = LambdaElement>>(iter: I) -> Self {
        iter.fold(LambdaElement::one(), |a, b| &a * &b)
    }
}

impl From<i64> for LambdaElement {
    fn from(n: i64) -> Self {
        LambdaElement::int(n)
    }
}

impl fmt::Display for LambdaElement {
    /// Human form `c·N/D` with `D` split into ℓ and cyclotomic factors, e.g.
    /// `(ℓ+1)/(ℓ-1)` or `-1/(2ℓ(ℓ+1))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let num = self.num.shift_up(self.shift.max(0) as usize);
        let (content, prim) = num.content_split();
        let sign = if content.is_negative() { "-" } else { "" };
        let cnum = content.numer().abs();
        let cden = content.denom().clone();

        let mut num_str = String::new();
        if prim.is_one() {
            num_str.push_str(&cnum.to_string());
        } else {
            let is_monomial = prim.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
            let body = prim.render("ℓ");
            let c1 = cnum.is_one();
            num_str = match (c1, is_monomial) {
                (true, _) => body,
                (false, true) => format!("{cnum}{body}"),
                (false, false) => format!("{cnum}({body})"),
            };
        }

        let mut den_parts: Vec<String> = Vec::new();
        if !cden.is_one() {
            den_parts.push(cden.to_string());
        }
        if self.shift < 0 {
            let a = -self.shift;
            den_parts.push(if a == 1 { "ℓ".to_string() } else { format!("ℓ^{a}") });
        }
        if !self.den.is_one() {
            let mult = cyclotomic_multiplicities(&self.den).expect("denominator is cyclotomic");
            for (d, e) in mult {
                let body = format!("({})", phi(d).render("ℓ"));
                den_parts.push(if e == 1 { body } else { format!("{body}^{e}") });
            }
        }
        if den_parts.is_empty() {
            return write!(f, "{sign}{num_str}");
        }
        let needs_num_parens = prim.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 && cnum.is_one();
        let num_str = if needs_num_parens { format!("({num_str})") } else { num_str };
        let den_str = den_parts.concat();
        if den_parts.len() == 1 {
            write!(f, "{sign}{num_str}/{den_str}")
        } else {
            write!(f, "{sign}{num_str}/({den_str})")
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    pow: i64,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct DenJson {
    k: usize,
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct LambdaJson {
    num: Vec<TermJson>,
    den: Vec<DenJson>,
    lpow: i64,
}

impl From<LambdaElement> for LambdaJson {
    fn from(x: LambdaElement) -> Self {
        let (num, den) = x.denominator_factors();
        let (poly, lpow) = num.to_poly_shift();
        let num = poly
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| TermJson { pow: k as i64, coeff: c.to_string() })
            .collect();
        let den = den.into_iter().map(|(k, mult)| DenJson { k, mult }).collect();
        LambdaJson { num, den, lpow }
    }
}

impl TryFrom<LambdaJson> for LambdaElement {
    type Error = LambdaError;
    fn try_from(j: LambdaJson) -> Result<Self, LambdaError> {
        let mut num = LaurentPolynomial::zero();
        for t in j.num {
            let c: Q = t.coeff.parse().map_err(|_| LambdaError::Parse(t.coeff.clone()))?;
            num.add_term(t.pow + j.lpow, c);
        }
        let mut den = Vec::new();
        for d in j.den {
            if d.k == 0 {
                return Err(LambdaError::Parse("denominator factor with k = 0".into()));
            }
            den.push((d.k, d.mult));
        }
        Ok(LambdaElement::from_factors(&num, &den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn inv_lm1() -> LambdaElement {
        LambdaElement::ell_k_minus_one_pow(1, -1)
    }

    fn l_plus_1_over_l_minus_1() -> LambdaElement {
        LambdaElement::from_fraction(0, Poly::from_ints(&[1, 1]), Poly::from_ints(&[-1, 1])).unwrap()
    }

    #[test]
    fn additive_inverse_is_zero() {
        let x = inv_lm1();
        assert!((&x + &(-&x)).is_zero());
        assert_eq!(&x + &(-&x), LambdaElement::zero());
    }

    #[test]
    fn cancellation_to_lowest_terms() {
        let x = LambdaElement::from_fraction(0, Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[-1, 1]).pow(2)).unwrap();
        assert_eq!(x, l_plus_1_over_l_minus_1());
        assert_eq!(x.to_string(), "(ℓ+1)/(ℓ-1)");
    }

    #[test]
    fn difference_of_squares_over_square() {
        let d = LambdaElement::ell_k_minus_one_pow(1, -2);
        let x = &(&LambdaElement::ell_pow(2) * &d) - &d;
        assert_eq!(x, l_plus_1_over_l_minus_1());
        for (pt, want) in [(2, q(3, 1)), (3, q(2, 1)), (5, q(3, 2))] {
            assert_eq!(x.eval_at(&q(pt, 1)).unwrap(), want);
        }
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(l_plus_1_over_l_minus_1().eval_at(&q(2, 1)).unwrap(), q(3, 1));
        let v = LambdaElement::ell_pow(-1) * inv_lm1() * LambdaElement::ell_k_minus_one_pow(2, -1);
        assert_eq!(v.eval_at(&q(2, 1)).unwrap(), q(1, 6));
        assert!(matches!(inv_lm1().eval_at(&q(1, 1)), Err(LambdaError::Pole(_))));
    }

    #[test]
    fn lambda0_and_projection() {
        let lp1 = LambdaElement::from_poly(&Poly::from_ints(&[1, 1]));
        assert!(lp1.in_lambda0());
        assert_eq!(lp1.project_omega().unwrap(), OmegaValue(q(2, 1)));
        assert!(!inv_lm1().in_lambda0());
        assert!(inv_lm1().project_omega().is_err());
        let j = LambdaElement::from_fraction(0, Poly::from_ints(&[-1]), Poly::from_ints(&[0, 2, 2])).unwrap();
        assert!(j.in_lambda0());
        assert_eq!(j.project_omega().unwrap(), OmegaValue(q(-1, 4)));
        assert_eq!(j.to_string(), "-1/(2ℓ(ℓ+1))");
    }

    #[test]
    fn division_leaving_lambda_is_rejected() {
        let y = LambdaElement::from_poly(&Poly::from_ints(&[-2, 1]));
        assert!(matches!(LambdaElement::one().checked_div(&y), Err(LambdaError::NotInLambda(_))));
        assert!(matches!(LambdaElement::one().checked_div(&LambdaElement::zero()), Err(LambdaError::DivisionByZero)));
        let z = LambdaElement::from_poly(&Poly::from_ints(&[1, 0, 1]));
        assert_eq!(LambdaElement::one().checked_div(&z).unwrap().eval_at(&q(2, 1)).unwrap(), q(1, 5));
    }

    #[test]
    fn factor_view_reconstructs_value() {
        let j = LambdaElement::from_fraction(0, Poly::from_ints(&[-1]), Poly::from_ints(&[0, 2, 2])).unwrap();
        let (num, den) = j.denominator_factors();
        assert_eq!(den, vec![(2, 1)]);
        assert_eq!(LambdaElement::from_factors(&num, &den), j);
    }

    #[test]
    fn json_round_trip() {
        let j = LambdaElement::from_fraction(3, Poly::from_ints(&[-1, 4]), Poly::from_ints(&[0, 2, 2])).unwrap();
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"num":[{"pow":2,"coeff":"2"},{"pow":1,"coeff":"-5/2"},{"pow":0,"coeff":"1/2"}],"den":[{"k":2,"mult":1}],"lpow":2}"#);
        let back: LambdaElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn display_forms() {
        assert_eq!(LambdaElement::zero().to_string(), "0");
        assert_eq!(LambdaElement::from_poly(&Poly::from_ints(&[1, 1])).to_string(), "ℓ+1");
        assert_eq!(LambdaElement::ell_pow(2).scale(&q(3, 1)).to_string(), "3ℓ^2");
        assert_eq!(inv_lm1().pow(2).to_string(), "1/(ℓ-1)^2");
        assert_eq!(LambdaElement::ell_pow(-1).to_string(), "1/ℓ");
        assert_eq!(LambdaElement::rational(q(-1, 2)).to_string(), "-1/2");
    }
}
