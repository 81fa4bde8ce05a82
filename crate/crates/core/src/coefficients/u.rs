use num_traits::{One, Zero};

use crate::combinat::{compositions, cuts, factorial};
use crate::lambda_ring::{qi, Q};
use crate::stability_core::{ADatum, KClass, Poset, WeakStability};

use super::s::{s_on_cuts, IntervalTaus};
use super::trees::Digraph;
use super::CoeffError;

/// The coefficient U({1..n}, <=, κ, τ, τ̃), a rational number.
pub fn u_coeff(d: &ADatum, tau: &WeakStability, ttau: &WeakStability) -> Result<Q, CoeffError> {
    let n = d.len();
    let t = IntervalTaus::new(d, tau)?;
    let tt = IntervalTaus::new(d, ttau)?;
    let target = tt.get(0, n).clone();
    let mut total = Q::zero();
    for psi in compositions(n) {
        let pc = cuts(&psi);
        // Parts of the merged datum λ must share τ with every piece they absorb.
        let flat = pc.windows(2).all(|w| (w[0]..w[1]).all(|i| t.get(i, i + 1) == t.get(w[0], w[1])));
        if !flat {
            continue;
        }
        let psi_weight: Q = psi.iter().map(|&s| Q::new(1.into(), factorial(s).into())).product();
        let m = psi.len();
        for xi in compositions(m) {
            let xc = cuts(&xi);
            if !xc.windows(2).all(|w| tt.get(pc[w[0]], pc[w[1]]) == &target) {
                continue;
            }
            let mut prod = 1i64;
            for w in xc.windows(2) {
                prod *= s_on_cuts(&pc[w[0]..=w[1]], &t, &tt);
                if prod == 0 {
                    break;
                }
            }
            if prod == 0 {
                continue;
            }
            let l = xi.len() as i64;
            let sign = if l % 2 == 1 { 1 } else { -1 };
            total += Q::new((sign * prod).into(), l.into()) * &psi_weight;
        }
    }
    Ok(total)
}

/// V(Γ, κ, τ, τ̃) = `1/(2^(n-1) n!)` times the sum of U over the total orders
/// extending the edge relation of Γ.
pub fn v_coeff(graph: &Digraph, kappa: &[KClass], tau: &WeakStability, ttau: &WeakStability) -> Result<Q, CoeffError> {
    let n = graph.len();
    if kappa.len() != n {
        return Err(CoeffError::Shape(format!("κ has {} entries for a graph on {} vertices", kappa.len(), n)));
    }
    if !graph.is_tree() {
        return Err(CoeffError::NotATree);
    }
    let poset = Poset::from_relations(n, graph.edges())?;
    let mut total = Q::zero();
    for order in poset.linear_extensions() {
        let d = ADatum::new(order.iter().map(|&i| kappa[i].clone()).collect())?;
        total += u_coeff(&d, tau, ttau)?;
    }
    let norm = Q::new(1.into(), (num_bigint::BigInt::from(2u32).pow((n - 1) as u32)) * factorial(n));
    Ok(total * norm)
}

/// Value predicted for U when τ̃ dominates τ: that of S for the same datum.
pub fn u_dominant_closed_form(d: &ADatum, tau: &WeakStability, ttau: &WeakStability) -> Result<Q, CoeffError> {
    Ok(qi(super::s::s_dominant_closed_form(d, tau, ttau)?))
}

/// `1` when `n = 1`, else `0`; the value of U(τ, τ).
pub fn u_diagonal(n: usize) -> Q {
    if n == 1 {
        Q::one()
    } else {
        Q::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_ring::qr;

    fn slope10() -> WeakStability {
        WeakStability::slope(vec![1, 0], vec![1, 1])
    }

    #[test]
    fn kronecker_u() {
        let a: ADatum = "[1,0];[0,1]".parse().unwrap();
        let b: ADatum = "[0,1];[1,0]".parse().unwrap();
        let c0 = WeakStability::slope(vec![1, 0], vec![1, 1]);
        let c1 = WeakStability::slope(vec![0, 1], vec![1, 1]);
        assert_eq!(u_coeff(&a, &c0, &c1).unwrap(), qi(1));
        assert_eq!(u_coeff(&b, &c0, &c1).unwrap(), qi(-1));
        // The merged single part adds 1/2 to the S-term -1.
        assert_eq!(u_coeff(&a, &WeakStability::Trivial, &slope10()).unwrap(), qr(-1, 2));
    }

    #[test]
    fn diagonal() {
        for s in ["[1,0]", "[1,0];[0,1]", "[1,0];[1,0]", "[1,0];[2,0];[0,1]"] {
            let d: ADatum = s.parse().unwrap();
            assert_eq!(u_coeff(&d, &slope10(), &slope10()).unwrap(), u_diagonal(d.len()), "{s}");
        }
    }

    #[test]
    fn equal_tau_parts_under_trivial_change() {
        // Two equal parts, τ = τ̃: the ψ-merge contributes -1/2 + 1/2.
        let d: ADatum = "[1,0];[1,0]".parse().unwrap();
        assert_eq!(u_coeff(&d, &WeakStability::Trivial, &WeakStability::Trivial).unwrap(), qi(0));
        let d3: ADatum = "[1]".parse().unwrap();
        assert_eq!(u_coeff(&d3, &WeakStability::Trivial, &WeakStability::Trivial).unwrap(), qi(1));
    }

    #[test]
    fn kronecker_v() {
        let c0 = WeakStability::slope(vec![1, 0], vec![1, 1]);
        let c1 = WeakStability::slope(vec![0, 1], vec![1, 1]);
        let kappa = vec![KClass::from([1, 0]), KClass::from([0, 1])];
        let fwd = Digraph::new(2, vec![(0, 1)]).unwrap();
        let back = Digraph::new(2, vec![(1, 0)]).unwrap();
        assert_eq!(v_coeff(&fwd, &kappa, &c0, &c1).unwrap(), qr(1, 4));
        assert_eq!(v_coeff(&back, &kappa, &c0, &c1).unwrap(), qr(-1, 4));
    }
}
