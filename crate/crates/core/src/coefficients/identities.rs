//! Sums whose values are fixed by composition laws for S, T and U.

use num_traits::Zero;

use crate::combinat::{compositions, factorial, surjections};
use crate::lambda_ring::Q;
use crate::stability_core::{is_dominant, ADatum, KClass, Poset, WeakStability};

use super::s::s_coeff;
use super::u::u_coeff;
use super::{t_coeff, CoeffError};

/// Both sides of the S composition law through an intermediate `τ̂`:
/// `(Σ_ψ S(λ, τ̂, τ̃) Π_k S(ψ⁻¹(k), τ, τ̂), S(κ, τ, τ̃))`.
pub fn s_composition(d: &ADatum, tau: &WeakStability, that: &WeakStability, ttau: &WeakStability) -> Result<(i64, i64), CoeffError> {
    let mut lhs = 0i64;
    for psi in compositions(d.len()) {
        let mut prod = 1i64;
        let mut start = 0;
        for &b in &psi {
            prod *= s_coeff(&d.slice(start, start + b), tau, that)?;
            start += b;
            if prod == 0 {
                break;
            }
        }
        if prod != 0 {
            prod *= s_coeff(&d.merge_blocks(&psi), that, ttau)?;
        }
        lhs += prod;
    }
    Ok((lhs, s_coeff(d, tau, ttau)?))
}

/// The same law with U in place of S.
pub fn u_composition(d: &ADatum, tau: &WeakStability, that: &WeakStability, ttau: &WeakStability) -> Result<(Q, Q), CoeffError> {
    let mut lhs = Q::zero();
    for psi in compositions(d.len()) {
        let mut prod = Q::from_integer(1.into());
        let mut start = 0;
        for &b in &psi {
            prod *= u_coeff(&d.slice(start, start + b), tau, that)?;
            start += b;
            if prod.is_zero() {
                break;
            }
        }
        if !prod.is_zero() {
            prod *= u_coeff(&d.merge_blocks(&psi), that, ttau)?;
        }
        lhs += prod;
    }
    Ok((lhs, u_coeff(d, tau, ttau)?))
}

/// Both sides of the T composition law for a dominant `(I, ⪯, K, φ)`:
/// the sum over surjections `ψ: I -> {0..m-1}` with `φ = ξ∘ψ` and
/// `(I, ⪯, J, ψ)` dominant of `T(.., ψ, τ, τ̂) T(.., ξ, τ̂, τ̃) / m!`,
/// together with `T(.., φ, τ, τ̃)`.
pub fn t_composition(
    poset: &Poset,
    kappa: &[KClass],
    k: usize,
    phi: &[usize],
    tau: &WeakStability,
    that: &WeakStability,
    ttau: &WeakStability,
) -> Result<(Q, i64), CoeffError> {
    let n = poset.len();
    let rhs = t_coeff(poset, kappa, k, phi, tau, ttau)?;
    let mut lhs = Q::zero();
    for m in k..=n {
        let mut acc = 0i64;
        for psi in surjections(n, m) {
            // ξ is determined by φ = ξ∘ψ, when it exists.
            let mut xi = vec![usize::MAX; m];
            let mut consistent = true;
            for i in 0..n {
                if xi[psi[i]] == usize::MAX {
                    xi[psi[i]] = phi[i];
                } else if xi[psi[i]] != phi[i] {
                    consistent = false;
                    break;
                }
            }
            if !consistent {
                continue;
            }
            let Some(jposet) = is_dominant(poset, m, &psi)? else { continue };
            if is_dominant(&jposet, k, &xi)?.is_none() {
                continue;
            }
            let lambda: Vec<KClass> = (0..m)
                .map(|j| KClass::sum(&(0..n).filter(|&i| psi[i] == j).map(|i| kappa[i].clone()).collect::<Vec<_>>()))
                .collect();
            let a = t_coeff(poset, kappa, m, &psi, tau, that)?;
            if a == 0 {
                continue;
            }
            acc += a * t_coeff(&jposet, &lambda, k, &xi, that, ttau)?;
        }
        lhs += Q::new(acc.into(), factorial(m).into());
    }
    Ok((lhs, rhs))
}

/// The two inversion sums over factorisations `φ = ξ∘ψ` of a monotone
/// surjection with block sizes `phi_blocks`; both equal `[every block has size 1]`.
pub fn inversion_sums(phi_blocks: &[usize]) -> (Q, Q) {
    let n: usize = phi_blocks.iter().sum();
    let mut first = Q::zero();
    let mut second = Q::zero();
    for psi in compositions(n) {
        // ψ must refine φ: its cuts include every φ-cut.
        let mut xi_sizes = Vec::with_capacity(phi_blocks.len());
        let mut it = psi.iter();
        let mut ok = true;
        for &pb in phi_blocks {
            let (mut filled, mut count) = (0, 0);
            while filled < pb {
                match it.next() {
                    Some(&s) => {
                        filled += s;
                        count += 1;
                    }
                    None => break,
                }
            }
            if filled != pb {
                ok = false;
                break;
            }
            xi_sizes.push(count);
        }
        if !ok {
            continue;
        }
        let inv_fact = |v: &[usize]| -> Q { v.iter().map(|&s| Q::new(1.into(), factorial(s).into())).product() };
        let log_coeff = |v: &[usize]| -> Q { v.iter().map(|&s| Q::new((if s % 2 == 1 { 1 } else { -1 }).into(), (s as i64).into())).product() };
        first += inv_fact(&xi_sizes) * log_coeff(&psi);
        second += log_coeff(&xi_sizes) * inv_fact(&psi);
    }
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_ring::qi;
    use num_traits::One;

    #[test]
    fn inversion_examples() {
        assert_eq!(inversion_sums(&[1, 1, 1]), (Q::one(), Q::one()));
        for blocks in [vec![2], vec![3], vec![1, 2], vec![2, 2], vec![4, 1], vec![5]] {
            assert_eq!(inversion_sums(&blocks), (Q::zero(), Q::zero()), "{blocks:?}");
        }
    }

    #[test]
    fn kronecker_compositions() {
        let d: ADatum = "[1,0];[0,1]".parse().unwrap();
        let t = WeakStability::Trivial;
        let c0 = WeakStability::slope(vec![1, 0], vec![1, 1]);
        let c1 = WeakStability::slope(vec![0, 1], vec![1, 1]);
        let (l, r) = s_composition(&d, &t, &c1, &c0).unwrap();
        assert_eq!(l, r);
        let (l, r) = u_composition(&d, &c0, &t, &c1).unwrap();
        assert_eq!(l, r);
        assert_eq!(r, qi(1));
    }

    #[test]
    fn t_composition_on_chain() {
        let kappa = vec![KClass::from([1, 0]), KClass::from([0, 1]), KClass::from([1, 1])];
        let t = WeakStability::Trivial;
        let c0 = WeakStability::slope(vec![1, 0], vec![1, 1]);
        let c1 = WeakStability::slope(vec![0, 1], vec![1, 1]);
        let p = Poset::chain(3);
        for (k, phi) in [(1, vec![0, 0, 0]), (2, vec![0, 0, 1]), (3, vec![0, 1, 2])] {
            let (l, r) = t_composition(&p, &kappa, k, &phi, &t, &c1, &c0).unwrap();
            assert_eq!(l, qi(r), "φ = {phi:?}");
        }
    }
}
