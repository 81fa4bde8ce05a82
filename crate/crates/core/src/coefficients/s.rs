use crate::combinat::{compositions, cuts};
use crate::stability_core::{is_dominant, ADatum, KClass, Poset, TauValue, WeakStability};

use super::CoeffError;

/// τ-values of every interval sum `κ(i) + .. + κ(j-1)`, `0 <= i < j <= n`.
pub(crate) struct IntervalTaus {
    n: usize,
    vals: Vec<TauValue>,
}

impl IntervalTaus {
    pub(crate) fn new(d: &ADatum, stab: &WeakStability) -> Result<Self, CoeffError> {
        let n = d.len();
        let mut vals = Vec::with_capacity(n * n);
        for i in 0..n {
            let mut acc = KClass::zero(d.parts()[0].dim());
            for j in 0..n {
                if j >= i {
                    acc = &acc + &d.parts()[j];
                    vals.push(stab.tau_of(&acc)?);
                } else {
                    vals.push(TauValue::Trivial);
                }
            }
        }
        Ok(IntervalTaus { n, vals })
    }

    /// Value on `[i, j)`.
    pub(crate) fn get(&self, i: usize, j: usize) -> &TauValue {
        debug_assert!(i < j && j <= self.n);
        &self.vals[i * self.n + (j - 1)]
    }
}

/// S evaluated on the sequence of consecutive blocks `[c_b, c_{b+1})`.
pub(crate) fn s_on_cuts(c: &[usize], t: &IntervalTaus, tt: &IntervalTaus) -> i64 {
    let m = c.len() - 1;
    let (lo, hi) = (c[0], c[m]);
    let mut sign = 1;
    for b in 0..m.saturating_sub(1) {
        let up = t.get(c[b], c[b + 1]) <= t.get(c[b + 1], c[b + 2]);
        let pre = tt.get(lo, c[b + 1]);
        let suf = tt.get(c[b + 1], hi);
        if up && pre > suf {
            sign = -sign;
        } else if !up && pre <= suf {
        } else {
            return 0;
        }
    }
    sign
}

/// The coefficient S({1..n}, <=, κ, τ, τ̃) in {-1, 0, 1}.
pub fn s_coeff(d: &ADatum, tau: &WeakStability, ttau: &WeakStability) -> Result<i64, CoeffError> {
    let t = IntervalTaus::new(d, tau)?;
    let tt = IntervalTaus::new(d, ttau)?;
    Ok(s_on_cuts(&(0..=d.len()).collect::<Vec<_>>(), &t, &tt))
}

/// S through the double sum over monotone surjections `α: [n] -> [a]`,
/// `β: [a] -> [b]` with τ-reversing α-blocks and τ̃-semistable merged datum,
/// each term weighted `(-1)^(a-b)`.
pub fn s_coeff_alt(d: &ADatum, tau: &WeakStability, ttau: &WeakStability) -> Result<i64, CoeffError> {
    let n = d.len();
    let t = IntervalTaus::new(d, tau)?;
    let tt = IntervalTaus::new(d, ttau)?;
    let mut total = 0i64;
    for alpha in compositions(n) {
        let ac = cuts(&alpha);
        let reversing = ac.windows(2).all(|w| (w[0]..w[1] - 1).all(|i| t.get(i, i + 1) > t.get(i + 1, i + 2)));
        if !reversing {
            continue;
        }
        let a = alpha.len();
        for beta in compositions(a) {
            let bc: Vec<usize> = cuts(&beta).into_iter().map(|x| ac[x]).collect();
            let b = beta.len();
            let semistable = (1..b).all(|i| tt.get(0, bc[i]) <= tt.get(bc[i], n));
            if semistable {
                total += if (a - b) % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    Ok(total)
}

/// T(I, ⪯, κ, K, φ, τ, τ̃): product of S over the fibers of a dominant quadruple.
pub fn t_coeff(poset: &Poset, kappa: &[KClass], k: usize, phi: &[usize], tau: &WeakStability, ttau: &WeakStability) -> Result<i64, CoeffError> {
    if kappa.len() != poset.len() {
        return Err(CoeffError::Shape(format!("κ has {} entries for a poset on {} points", kappa.len(), poset.len())));
    }
    if is_dominant(poset, k, phi)?.is_none() {
        return Err(CoeffError::NotDominant);
    }
    let mut prod = 1;
    for f in 0..k {
        let fiber: Vec<usize> = (0..poset.len()).filter(|&i| phi[i] == f).collect();
        let chain = poset.sorted_chain(&fiber).ok_or(CoeffError::NotDominant)?;
        let datum = ADatum::new(chain.iter().map(|&i| kappa[i].clone()).collect())?;
        prod *= s_coeff(&datum, tau, ttau)?;
        if prod == 0 {
            break;
        }
    }
    Ok(prod)
}

/// Value predicted for S when τ̃ dominates τ: 1 exactly when τ∘κ strictly
/// decreases and τ̃∘κ is constant at τ̃(α).
pub fn s_dominant_closed_form(d: &ADatum, tau: &WeakStability, ttau: &WeakStability) -> Result<i64, CoeffError> {
    let ta = ttau.tau_of(&d.total())?;
    let mut dec = true;
    for w in d.parts().windows(2) {
        dec &= tau.tau_of(&w[0])? > tau.tau_of(&w[1])?;
    }
    let mut flat = true;
    for p in d.parts() {
        flat &= ttau.tau_of(p)? == ta;
    }
    Ok(i64::from(dec && flat))
}

/// Value predicted for S(λ, τ̃, τ) when τ̃ dominates τ: `(-1)^(m-1)` when every
/// prefix has larger τ than its complement and τ̃∘λ is constant, else 0.
pub fn s_inverse_dominant_closed_form(d: &ADatum, tau: &WeakStability, ttau: &WeakStability) -> Result<i64, CoeffError> {
    let m = d.len();
    let ta = ttau.tau_of(&d.total())?;
    for p in d.parts() {
        if ttau.tau_of(p)? != ta {
            return Ok(0);
        }
    }
    for i in 1..m {
        if tau.tau_of(&d.interval(0, i))? <= tau.tau_of(&d.interval(i, m))? {
            return Ok(0);
        }
    }
    Ok(if m % 2 == 1 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slope10() -> WeakStability {
        WeakStability::slope(vec![1, 0], vec![1, 1])
    }

    #[test]
    fn single_part_is_one() {
        let d: ADatum = "[3,1]".parse().unwrap();
        assert_eq!(s_coeff(&d, &WeakStability::Trivial, &slope10()).unwrap(), 1);
        assert_eq!(s_coeff_alt(&d, &WeakStability::Trivial, &slope10()).unwrap(), 1);
    }

    #[test]
    fn equal_stabilities_vanish() {
        let d: ADatum = "[1,0];[0,1]".parse().unwrap();
        assert_eq!(s_coeff(&d, &slope10(), &slope10()).unwrap(), 0);
        let flat: ADatum = "[1,0];[2,0]".parse().unwrap();
        assert_eq!(s_coeff_alt(&flat, &slope10(), &slope10()).unwrap(), 0);
    }

    #[test]
    fn kronecker_examples() {
        let a: ADatum = "[1,0];[0,1]".parse().unwrap();
        let b: ADatum = "[0,1];[1,0]".parse().unwrap();
        assert_eq!(s_coeff(&a, &WeakStability::Trivial, &slope10()).unwrap(), -1);
        assert_eq!(s_coeff(&b, &WeakStability::Trivial, &slope10()).unwrap(), 0);
        assert_eq!(s_coeff_alt(&a, &WeakStability::Trivial, &slope10()).unwrap(), -1);
        assert_eq!(s_coeff_alt(&b, &WeakStability::Trivial, &slope10()).unwrap(), 0);
    }

    #[test]
    fn t_examples() {
        let kappa = vec![KClass::from([1, 0]), KClass::from([0, 1])];
        let chain = Poset::chain(2);
        assert_eq!(t_coeff(&chain, &kappa, 2, &[0, 1], &slope10(), &slope10()).unwrap(), 1);
        assert_eq!(t_coeff(&chain, &kappa, 1, &[0, 0], &slope10(), &slope10()).unwrap(), 0);
        assert_eq!(t_coeff(&chain, &kappa, 1, &[0, 0], &WeakStability::Trivial, &slope10()).unwrap(), -1);
        assert!(matches!(t_coeff(&Poset::antichain(2), &kappa, 1, &[0, 0], &slope10(), &slope10()), Err(CoeffError::NotDominant)));
    }
}
