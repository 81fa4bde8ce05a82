//! Representations of a quiver without relations: Euler form, stack volumes,
//! semistable invariants and a brute-force finite-field oracle.

mod field;
mod oracle;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariant_engine::{
    j_from_iss, wallcross_iss, ConeEnumerator, EngineError, Enumerator, EulerPairing, Flavor, InvariantTable,
};
use crate::lambda_ring::{LambdaElement, LaurentPolynomial, Q};
use crate::stability_core::{prefix_exceeds_total, KClass, StabilityError, WeakStability};

pub use field::{gl_order, subspaces, FiniteField, Subspace};
pub use oracle::{ff_count_semistable, OracleGuard};

#[derive(Debug, Error)]
pub enum QuiverError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("dimension vector {got:?} does not match {expected} vertices")]
    BadDimVector { expected: usize, got: Vec<i64> },
    #[error("unsupported field size {0}")]
    UnsupportedField(usize),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("stability must be trivial or a slope with integer vectors and positive rank on vertices")]
    BadStability,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error("bad quiver file: {0}")]
    Parse(String),
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    from: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<String>,
    arrows: Vec<ArrowJson>,
}

/// A finite quiver `Q = (Q0, Q1, b, e)`; arrows are stored by vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

impl QuiverPresentation {
    pub fn new(vertices: Vec<String>, arrows: &[(&str, &str)]) -> Result<Self, QuiverError> {
        let mut seen = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let idx = |s: &str| seen.get(s).copied().ok_or_else(|| QuiverError::UnknownVertex(s.to_string()));
        let arrows = arrows.iter().map(|(b, e)| Ok((idx(b)?, idx(e)?))).collect::<Result<_, QuiverError>>()?;
        Ok(QuiverPresentation { vertices, arrows })
    }

    /// Quiver on vertices `1..=n` with arrows given by one-based index pairs.
    pub fn from_indices(n: usize, arrows: &[(usize, usize)]) -> Self {
        assert!(arrows.iter().all(|&(b, e)| (1..=n).contains(&b) && (1..=n).contains(&e)));
        QuiverPresentation { vertices: (1..=n).map(|i| i.to_string()).collect(), arrows: arrows.iter().map(|&(b, e)| (b - 1, e - 1)).collect() }
    }

    pub fn one_vertex() -> Self {
        Self::from_indices(1, &[])
    }

    /// `m` parallel arrows `1 -> 2`.
    pub fn kronecker(m: usize) -> Self {
        Self::from_indices(2, &vec![(1, 2); m])
    }

    pub fn from_json(s: &str) -> Result<Self, QuiverError> {
        let j: QuiverJson = serde_json::from_str(s).map_err(|e| QuiverError::Parse(e.to_string()))?;
        let arrows: Vec<(&str, &str)> = j.arrows.iter().map(|a| (a.from.as_str(), a.to.as_str())).collect();
        Self::new(j.vertices.clone(), &arrows)
    }

    pub fn to_json(&self) -> String {
        let j = QuiverJson {
            vertices: self.vertices.clone(),
            arrows: self.arrows.iter().map(|&(b, e)| ArrowJson { from: self.vertices[b].clone(), to: self.vertices[e].clone() }).collect(),
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Validate a dimension vector: right length, nonnegative, nonzero.
    pub fn check_dim(&self, alpha: &KClass) -> Result<(), QuiverError> {
        if alpha.dim() != self.num_vertices() || alpha.0.iter().any(|&a| a < 0) || alpha.is_zero() {
            return Err(QuiverError::BadDimVector { expected: self.num_vertices(), got: alpha.0.clone() });
        }
        Ok(())
    }

    /// Check that a stability is trivial or a slope function usable here.
    pub fn check_stability(&self, mu: &WeakStability) -> Result<(), QuiverError> {
        match mu {
            WeakStability::Trivial => Ok(()),
            WeakStability::Slope { c, r } if c.len() == self.num_vertices() && r.len() == c.len() && r.iter().all(|&x| x > 0) => Ok(()),
            _ => Err(QuiverError::BadStability),
        }
    }
}

/// `χ(α, β) = Σ_v α(v)β(v) - Σ_a α(b(a))β(e(a))`.
pub fn euler_form(q: &QuiverPresentation) -> EulerPairing {
    let n = q.num_vertices();
    let mut m = vec![vec![0i64; n]; n];
    for (v, row) in m.iter_mut().enumerate() {
        row[v] = 1;
    }
    for &(b, e) in &q.arrows {
        m[b][e] -= 1;
    }
    EulerPairing::new(m).expect("square matrix")
}

/// Exponent `Σ_a α(b)α(e) - Σ_v α(v)(α(v)-1)/2` and denominator factors for
/// the volume of `[Rep_α / GL_α]`.
fn trivial_parts(q: &QuiverPresentation, alpha: &KClass) -> (i64, Vec<(usize, usize)>) {
    let a = &alpha.0;
    let mut e: i64 = q.arrows.iter().map(|&(b, t)| a[b] * a[t]).sum();
    let mut den: BTreeMap<usize, usize> = BTreeMap::new();
    for &m in a {
        e -= m * (m - 1) / 2;
        for k in 1..=m as usize {
            *den.entry(k).or_insert(0) += 1;
        }
    }
    (e, den.into_iter().collect())
}

/// Motivic volume of the stack of all representations of dimension `α`.
pub fn iss_trivial(q: &QuiverPresentation, alpha: &KClass) -> Result<LambdaElement, QuiverError> {
    q.check_dim(alpha)?;
    let (e, den) = trivial_parts(q, alpha);
    Ok(LambdaElement::from_factors(&LaurentPolynomial::monomial(Q::from_integer(1.into()), e), &den))
}

/// Dimension of the quotient stack `[Rep_α / GL_α]`: `Σ_a α(b)α(e) - Σ_v α(v)^2 = -χ(α, α)`.
pub fn stack_dimension(q: &QuiverPresentation, alpha: &KClass) -> i64 {
    -euler_form(q).eval(alpha, alpha)
}

/// Table of [`iss_trivial`] on every nonzero `β <= α`.
pub fn trivial_table(q: &QuiverPresentation, alpha: &KClass) -> Result<InvariantTable, QuiverError> {
    let mut t = InvariantTable::new(Flavor::Iss);
    for b in sub_classes(alpha) {
        let v = iss_trivial(q, &b)?;
        t.insert(b, v);
    }
    Ok(t)
}

/// Every nonzero `β <= α` componentwise, in lexicographic order.
pub fn sub_classes(alpha: &KClass) -> Vec<KClass> {
    let mut out = vec![Vec::new()];
    for &a in &alpha.0 {
        out = out.into_iter().flat_map(|p: Vec<i64>| (0..=a).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out.into_iter().map(KClass).filter(|k| !k.is_zero()).collect()
}

/// I_ss at a slope stability by the direct Harder-Narasimhan inversion: sum
/// over decompositions whose every proper prefix has larger slope than `α`,
/// weighted `(-1)^(n-1) ℓ^twist Π iss_trivial`.
pub fn iss_semistable(q: &QuiverPresentation, alpha: &KClass, mu: &WeakStability) -> Result<LambdaElement, QuiverError> {
    q.check_dim(alpha)?;
    q.check_stability(mu)?;
    let chi = euler_form(q);
    let mut total = LambdaElement::zero();
    for d in ConeEnumerator.decompositions(alpha)? {
        if !prefix_exceeds_total(&d, mu)? {
            continue;
        }
        let mut term = LambdaElement::one();
        for p in d.parts() {
            term = &term * &iss_trivial(q, p)?;
        }
        let term = term.mul_ell_pow(chi.twist(d.parts()));
        total = if d.len() % 2 == 1 { &total + &term } else { &total - &term };
    }
    Ok(total)
}

/// The same invariant through the generic wall-crossing transform from
/// trivial stability.
pub fn iss_semistable_wallcross(q: &QuiverPresentation, alpha: &KClass, mu: &WeakStability) -> Result<LambdaElement, QuiverError> {
    q.check_dim(alpha)?;
    q.check_stability(mu)?;
    let table = trivial_table(q, alpha)?;
    Ok(wallcross_iss(alpha, &WeakStability::Trivial, mu, &table, &euler_form(q), &ConeEnumerator)?)
}

/// Table of [`iss_semistable`] on every nonzero `β <= α`.
pub fn semistable_table(q: &QuiverPresentation, alpha: &KClass, mu: &WeakStability) -> Result<InvariantTable, QuiverError> {
    let mut t = InvariantTable::new(Flavor::Iss);
    for b in sub_classes(alpha) {
        let v = iss_semistable(q, &b, mu)?;
        t.insert(b, v);
    }
    Ok(t)
}

/// Table of J-invariants at `μ` on every nonzero `β <= α`.
pub fn j_table(q: &QuiverPresentation, alpha: &KClass, mu: &WeakStability) -> Result<InvariantTable, QuiverError> {
    let iss = semistable_table(q, alpha, mu)?;
    let chi = euler_form(q);
    let mut t = InvariantTable::new(Flavor::J);
    for b in sub_classes(alpha) {
        let v = j_from_iss(&b, mu, &iss, &chi, &ConeEnumerator)?;
        t.insert(b, v);
    }
    Ok(t)
}

/// Convenience: the value of a Λ element at `ℓ = q`.
pub fn eval_at_q(x: &LambdaElement, q: u64) -> Result<Q, QuiverError> {
    x.eval_at(&Q::from_integer(q.into())).map_err(|e| QuiverError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_ring::{qi, qr, Poly};

    fn c(v: [i64; 2]) -> WeakStability {
        WeakStability::slope(v.to_vec(), vec![1, 1])
    }

    #[test]
    fn euler_forms() {
        let one = euler_form(&QuiverPresentation::one_vertex());
        assert_eq!(one.eval(&KClass::from([1]), &KClass::from([1])), 1);
        let k = euler_form(&QuiverPresentation::kronecker(2));
        assert_eq!(k.eval(&KClass::from([1, 0]), &KClass::from([0, 1])), -2);
        assert_eq!(k.eval(&KClass::from([0, 1]), &KClass::from([1, 0])), 0);
        assert_eq!(k.antisymmetrized().eval(&KClass::from([1, 0]), &KClass::from([0, 1])), -2);
    }

    #[test]
    fn trivial_volumes() {
        let one = QuiverPresentation::one_vertex();
        assert_eq!(iss_trivial(&one, &KClass::from([1])).unwrap(), LambdaElement::ell_k_minus_one_pow(1, -1));
        let v2 = iss_trivial(&one, &KClass::from([2])).unwrap();
        assert_eq!(v2.eval_at(&qi(2)).unwrap(), qr(1, 6));
        let k = QuiverPresentation::kronecker(2);
        let v = iss_trivial(&k, &KClass::from([1, 1])).unwrap();
        assert_eq!(v, LambdaElement::ell_pow(2) * LambdaElement::ell_k_minus_one_pow(1, -2));
        assert_eq!(v.eval_at(&qi(2)).unwrap(), qi(4));
    }

    #[test]
    fn top_degree_is_stack_dimension() {
        let k = QuiverPresentation::kronecker(2);
        for a in sub_classes(&KClass::from([2, 3])) {
            assert_eq!(iss_trivial(&k, &a).unwrap().degree(), Some(stack_dimension(&k, &a)), "{a}");
        }
    }

    #[test]
    fn kronecker_semistable() {
        let k = QuiverPresentation::kronecker(2);
        let a = KClass::from([1, 1]);
        let expected = LambdaElement::from_fraction(0, Poly::from_ints(&[1, 1]), Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(iss_semistable(&k, &a, &c([1, 0])).unwrap(), expected);
        assert_eq!(iss_semistable_wallcross(&k, &a, &c([1, 0])).unwrap(), expected);
        assert!(iss_semistable(&k, &a, &c([0, 1])).unwrap().is_zero());
        assert!(iss_semistable_wallcross(&k, &a, &c([0, 1])).unwrap().is_zero());
    }

    #[test]
    fn one_vertex_any_slope_is_trivial() {
        let one = QuiverPresentation::one_vertex();
        let mu = WeakStability::slope(vec![3], vec![2]);
        for n in 1..=4 {
            let a = KClass::from([n]);
            assert_eq!(iss_semistable(&one, &a, &mu).unwrap(), iss_trivial(&one, &a).unwrap());
        }
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"vertices":["1","2"],"arrows":[{"from":"1","to":"2"},{"from":"1","to":"2"}]}"#;
        let q = QuiverPresentation::from_json(s).unwrap();
        assert_eq!(q, QuiverPresentation::kronecker(2));
        assert_eq!(q.to_json(), s);
        assert!(QuiverPresentation::from_json(r#"{"vertices":["1"],"arrows":[{"from":"1","to":"3"}]}"#).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let k = QuiverPresentation::kronecker(2);
        assert!(iss_trivial(&k, &KClass::from([1])).is_err());
        assert!(iss_semistable(&k, &KClass::from([1, 1]), &WeakStability::slope(vec![1, 0], vec![1, 0])).is_err());
        assert!(iss_trivial(&k, &KClass::from([0, 0])).is_err());
    }

    #[test]
    fn j_values_in_lambda_zero() {
        let k = QuiverPresentation::kronecker(2);
        let t = j_table(&k, &KClass::from([2, 2]), &c([1, 0])).unwrap();
        t.check_lambda0().unwrap();
        assert_eq!(t.get(&KClass::from([1, 1])).unwrap().to_string(), "ℓ+1");
    }
}
