use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::element::LambdaElement;
use super::laurent::LaurentPolynomial;
use super::poly::Poly;
use super::{LambdaError, Q};

/// Laurent series in `z` (with `ℓ = z^2`) whose exponents are bounded above.
///
/// Coefficients are known exactly for exponents `>= floor`; everything below is
/// unknown and never stored. `floor == None` marks an exact finite sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    terms: BTreeMap<i64, Q>,
    floor: Option<i64>,
}

/// Floor of a product: with `T(x)` an upper bound on the degree of the true
/// value of `x`, the error of `x*y` sits strictly below `floor_x + T(y)` and
/// below `floor_y + T(x)`, so only exponents at or above both are known.
fn product_floor(x: &TruncatedSeries, y: &TruncatedSeries) -> Option<i64> {
    let bound = |s: &TruncatedSeries| -> Option<i64> {
        match (s.top_degree(), s.floor) {
            (Some(t), Some(f)) => Some(t.max(f - 1)),
            (Some(t), None) => Some(t),
            (None, Some(f)) => Some(f - 1),
            (None, None) => None,
        }
    };
    let part = |f: Option<i64>, other: Option<i64>| -> Option<i64> {
        match (f, other) {
            (Some(f), Some(t)) => Some(f + t),
            _ => None,
        }
    };
    match (part(x.floor, bound(y)), part(y.floor, bound(x))) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    }
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    }
}

impl TruncatedSeries {
    pub fn zero_exact() -> Self {
        TruncatedSeries { terms: BTreeMap::new(), floor: None }
    }

    /// Zero, known only down to `floor`.
    pub fn zero_to(floor: i64) -> Self {
        TruncatedSeries { terms: BTreeMap::new(), floor: Some(floor) }
    }

    pub fn exact(p: &LaurentPolynomial) -> Self {
        TruncatedSeries { terms: p.terms().clone(), floor: None }
    }

    /// Exact polynomial in `z`, `coeffs[k]` the coefficient of `z^k`.
    pub fn from_z_poly(p: &Poly) -> Self {
        Self::exact(&LaurentPolynomial::from_poly(p, 0))
    }

    pub fn monomial(c: Q, k: i64) -> Self {
        Self::exact(&LaurentPolynomial::monomial(c, k))
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(it: I, floor: Option<i64>) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in it {
            if floor.is_some_and(|f| k < f) || c.is_zero() {
                continue;
            }
            let e = terms.entry(k).or_insert_with(Q::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(&k);
            }
        }
        TruncatedSeries { terms, floor }
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn terms(&self) -> &BTreeMap<i64, Q> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> Q {
        self.terms.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Highest exponent with a nonzero known coefficient.
    pub fn top_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_zero_known(&self) -> bool {
        self.terms.is_empty()
    }

    /// Forget everything below `floor` (never lowers the current floor).
    pub fn truncate(&self, floor: i64) -> Self {
        let f = max_floor(self.floor, Some(floor));
        Self::from_terms(self.terms.iter().map(|(k, c)| (*k, c.clone())), f)
    }

    /// Equal on the common known window, and at least down to `floor`.
    pub fn agrees_to(&self, other: &TruncatedSeries, floor: i64) -> bool {
        let f = max_floor(max_floor(self.floor, other.floor), Some(floor)).unwrap_or(floor);
        if self.floor.is_some_and(|s| s > floor) || other.floor.is_some_and(|o| o > floor) {
            return false;
        }
        let keys: std::collections::BTreeSet<i64> = self.terms.keys().chain(other.terms.keys()).copied().filter(|k| *k >= f).collect();
        keys.into_iter().all(|k| self.coeff(k) == other.coeff(k))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)), self.floor)
    }

    /// Multiply by `z^k`, moving the floor with it.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            floor: self.floor.map(|f| f + k),
        }
    }

    /// Exact polynomial part as a Laurent polynomial in `z` (known window only).
    pub fn known_part(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms.iter().map(|(k, c)| (*k, c.clone())))
    }

    /// Quotient by a nonzero polynomial in `z`, expanded in descending powers.
    ///
    /// The result is exact when the division terminates; otherwise it is known
    /// down to `floor_out` (or the accuracy the input allows, if coarser).
    pub fn div_poly(&self, p: &Poly, floor_out: i64) -> Self {
        let deg = p.degree().expect("division by the zero polynomial") as i64;
        let lead_inv = p.lead().recip();
        let input_floor = self.floor.map(|f| f - deg);
        let floor = max_floor(input_floor, Some(floor_out)).unwrap_or(floor_out);
        let mut rem: BTreeMap<i64, Q> = self.terms.clone();
        let mut out: BTreeMap<i64, Q> = BTreeMap::new();
        loop {
            let Some((&top, _)) = rem.iter().next_back() else {
                return TruncatedSeries { terms: out, floor: input_floor.map(|_| floor) };
            };
            let e = top - deg;
            if e < floor {
                break;
            }
            let c = &rem[&top] * &lead_inv;
            for (j, pc) in p.coeffs().iter().enumerate() {
                if pc.is_zero() {
                    continue;
                }
                let k = e + j as i64;
                let v = rem.entry(k).or_insert_with(Q::zero);
                *v -= &c * pc;
                if v.is_zero() {
                    rem.remove(&k);
                }
            }
            out.insert(e, c);
        }
        TruncatedSeries { terms: out, floor: Some(floor) }
    }

    /// `z^k` coefficients of `x` as a function of `ℓ = z^2`, down to `floor`.
    pub fn expand(x: &LambdaElement, floor: i64) -> Self {
        expand_series(x, floor)
    }

    /// Render as a sum in descending powers, e.g. `z^2+4z+5+...`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.terms.iter().rev() {
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs == Q::from_integer(1.into()) {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if let Some(f) = self.floor {
            out.push_str(&format!(" + O(z^{})", f - 1));
        }
        out
    }
}

/// Expansion of an element of Λ as a series in `z^{-1}` down to `floor`.
///
/// Each factor `1/(ℓ^k - 1)` is the geometric series `sum_{n>=1} z^{-2nk}`; the
/// result is computed by descending division of the numerator by the reduced
/// denominator (both read at `ℓ = z^2`), which gives the same truncation.
pub fn expand_series(x: &LambdaElement, floor: i64) -> TruncatedSeries {
    if x.is_zero() {
        return TruncatedSeries::zero_to(floor);
    }
    let num = TruncatedSeries::exact(&LaurentPolynomial::from_poly(&x.numerator().inflate(2), 2 * x.ell_shift()));
    let den = x.denominator().inflate(2);
    if den.is_one() {
        return num.truncate(floor);
    }
    num.div_poly(&den, floor)
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let floor = max_floor(self.floor, rhs.floor);
        TruncatedSeries::from_terms(self.terms.iter().chain(rhs.terms.iter()).map(|(k, c)| (*k, c.clone())), floor)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self + &(-rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(), floor: self.floor }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let floor = product_floor(self, rhs);
        let mut terms: BTreeMap<i64, Q> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in rhs.terms.iter().rev() {
                let k = a + b;
                if floor.is_some_and(|f| k < f) {
                    break;
                }
                let e = terms.entry(k).or_insert_with(Q::zero);
                *e += x * y;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        TruncatedSeries { terms, floor }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    pow: i64,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    var: String,
    floor: Option<i64>,
    terms: Vec<TermJson>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            var: "z".into(),
            floor: self.floor,
            terms: self.terms.iter().rev().map(|(k, c)| TermJson { pow: *k, coeff: c.to_string() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        if j.var != "z" {
            return Err(serde::de::Error::custom(format!("unsupported series variable {}", j.var)));
        }
        let mut terms = Vec::new();
        for t in j.terms {
            let c: Q = t.coeff.parse().map_err(|_| serde::de::Error::custom(LambdaError::Parse(t.coeff.clone())))?;
            terms.push((t.pow, c));
        }
        Ok(TruncatedSeries::from_terms(terms, j.floor))
    }
}
