use num_bigint::BigInt;
use rayon::prelude::*;

use super::field::{decode, encode, gl_order, subspaces, FiniteField, Subspace};
use super::{sub_classes, QuiverError, QuiverPresentation};
use crate::lambda_ring::Q;
use crate::stability_core::{KClass, WeakStability};

/// Tractability limits for the brute-force count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleGuard {
    /// Bound on `Σ_v α(v)`.
    pub max_total_dim: i64,
    /// Bound on the field size.
    pub max_q: usize,
    /// Bound on the number of representations enumerated.
    pub max_representations: u64,
}

impl Default for OracleGuard {
    fn default() -> Self {
        OracleGuard { max_total_dim: 4, max_q: 4, max_representations: 1 << 24 }
    }
}

/// Stacky count of `μ`-semistable representations over `F_q`: the number of
/// arrow-matrix tuples with no destabilizing subrepresentation, divided by
/// `Π_v |GL(α(v), F_q)|`.
pub fn ff_count_semistable(quiver: &QuiverPresentation, alpha: &KClass, mu: &WeakStability, q: usize, guard: &OracleGuard) -> Result<Q, QuiverError> {
    quiver.check_dim(alpha)?;
    quiver.check_stability(mu)?;
    let total_dim: i64 = alpha.0.iter().sum();
    if total_dim > guard.max_total_dim {
        return Err(QuiverError::Guard(format!("total dimension {total_dim} exceeds {}", guard.max_total_dim)));
    }
    if q > guard.max_q {
        return Err(QuiverError::Guard(format!("field size {q} exceeds {}", guard.max_q)));
    }
    let field = FiniteField::new(q)?;
    let a: Vec<usize> = alpha.0.iter().map(|&x| x as usize).collect();
    let entries: usize = quiver.arrows().iter().map(|&(b, e)| a[b] * a[e]).sum();
    let reps = (q as u64).checked_pow(entries as u32).filter(|&r| r <= guard.max_representations);
    let Some(reps) = reps else {
        return Err(QuiverError::Guard(format!("{q}^{entries} representations exceed {}", guard.max_representations)));
    };

    // Dimension vectors of destabilizing subrepresentations.
    let ta = mu.tau_of(alpha)?;
    let mut bad_dims = Vec::new();
    for b in sub_classes(alpha) {
        if b == *alpha {
            continue;
        }
        let quot = alpha - &b;
        if mu.tau_of(&b)? > mu.tau_of(&quot)? {
            bad_dims.push(b);
        }
    }
    debug_assert!(bad_dims.iter().all(|b| mu.tau_of(b).map(|t| t > ta).unwrap_or(false)));
    let subs: Vec<Vec<Vec<Subspace>>> = a.iter().map(|&m| (0..=m).map(|k| subspaces(&field, m, k)).collect()).collect();

    let count = (0..reps)
        .into_par_iter()
        .filter(|&r| {
            let images = arrow_images(quiver, &a, &field, r);
            !bad_dims.iter().any(|b| has_invariant_tuple(quiver, b, &subs, &images))
        })
        .count();

    let mut group = BigInt::from(1);
    for &m in &a {
        group *= BigInt::from(gl_order(m, q as u64));
    }
    Ok(Q::new(BigInt::from(count), group))
}

/// For representation number `r`, the image of every source vector under every arrow.
fn arrow_images(quiver: &QuiverPresentation, a: &[usize], field: &FiniteField, mut r: u64) -> Vec<Vec<usize>> {
    let q = field.order();
    let mut out = Vec::with_capacity(quiver.arrows().len());
    for &(b, e) in quiver.arrows() {
        let (cols, rows) = (a[b], a[e]);
        let mut mat = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            mat.push((r % q as u64) as u8);
            r /= q as u64;
        }
        let n_src = q.pow(cols as u32);
        let mut img = Vec::with_capacity(n_src);
        for s in 0..n_src {
            let x = decode(s, cols, q);
            let y: Vec<u8> = (0..rows)
                .map(|i| (0..cols).fold(0u8, |acc, j| field.add(acc, field.mul(mat[i * cols + j], x[j]))))
                .collect();
            img.push(encode(&y, q));
        }
        out.push(img);
    }
    out
}

/// Is there a choice of subspaces of dimensions `β(v)` preserved by every arrow?
fn has_invariant_tuple(quiver: &QuiverPresentation, beta: &KClass, subs: &[Vec<Vec<Subspace>>], images: &[Vec<usize>]) -> bool {
    let n = beta.dim();
    let options: Vec<&Vec<Subspace>> = (0..n).map(|v| &subs[v][beta.0[v] as usize]).collect();
    if options.iter().any(|o| o.is_empty()) {
        return false;
    }
    let mut choice = vec![0usize; n];
    loop {
        let ok = quiver.arrows().iter().zip(images).all(|(&(b, e), img)| {
            let src = &options[b][choice[b]];
            let dst = &options[e][choice[e]];
            src.basis.iter().all(|&s| dst.members[img[s]])
        });
        if ok {
            return true;
        }
        let mut v = 0;
        while v < n {
            choice[v] += 1;
            if choice[v] < options[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
        if v == n {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_ring::{qi, qr};

    fn c(v: [i64; 2]) -> WeakStability {
        WeakStability::slope(v.to_vec(), vec![1, 1])
    }

    #[test]
    fn kronecker_counts() {
        let k = QuiverPresentation::kronecker(2);
        let a = KClass::from([1, 1]);
        let g = OracleGuard::default();
        assert_eq!(ff_count_semistable(&k, &a, &c([1, 0]), 2, &g).unwrap(), qi(3));
        assert_eq!(ff_count_semistable(&k, &a, &c([1, 0]), 3, &g).unwrap(), qi(2));
        assert_eq!(ff_count_semistable(&k, &a, &c([1, 0]), 4, &g).unwrap(), qr(5, 3));
        for q in [2, 3, 4] {
            assert_eq!(ff_count_semistable(&k, &a, &c([0, 1]), q, &g).unwrap(), qi(0));
        }
    }

    #[test]
    fn one_vertex_group_order() {
        let one = QuiverPresentation::one_vertex();
        let r = ff_count_semistable(&one, &KClass::from([2]), &WeakStability::Trivial, 2, &OracleGuard::default()).unwrap();
        assert_eq!(r, qr(1, 6));
    }

    #[test]
    fn guard_rejects_large_inputs() {
        let k = QuiverPresentation::kronecker(2);
        let g = OracleGuard::default();
        assert!(matches!(ff_count_semistable(&k, &KClass::from([3, 2]), &c([1, 0]), 2, &g), Err(QuiverError::Guard(_))));
        assert!(matches!(ff_count_semistable(&k, &KClass::from([1, 1]), &c([1, 0]), 5, &g), Err(QuiverError::Guard(_))));
    }
}
