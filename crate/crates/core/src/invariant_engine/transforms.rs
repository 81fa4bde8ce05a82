use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::pairing::{AntisymmetrizedPairing, EulerPairing};
use super::table::{Flavor, InvariantTable};
use super::EngineError;
use crate::coefficients::{enumerate_trees, s_coeff, t_coeff, u_coeff, TreeMode};
use crate::combinat::{factorial, permutations, surjections};
use crate::lambda_ring::{LambdaElement, OmegaValue, Q};
use crate::stability_core::{enumerate_decompositions, is_dominant, ADatum, Cone, KClass, Poset, WeakStability};

/// Source of the ordered decompositions `κ(1) + .. + κ(n) = α` summed over by
/// the transforms. It must list every decomposition with a nonzero summand.
pub trait Enumerator: Sync {
    fn decompositions(&self, alpha: &KClass) -> Result<Vec<ADatum>, EngineError>;
}

/// All decompositions in the nonnegative cone `ℕ^r \ {0}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConeEnumerator;

impl Enumerator for ConeEnumerator {
    fn decompositions(&self, alpha: &KClass) -> Result<Vec<ADatum>, EngineError> {
        Ok(enumerate_decompositions(alpha, Cone::Nonnegative, None)?)
    }
}

/// Direction of the ordering of a J-to-Ω tree sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeSumMode {
    /// All trees with all orientations, weighted by V.
    Tree48,
    /// Increasing trees, weighted by U over the natural order.
    Increasing49,
}

fn par_sum<F>(items: &[ADatum], f: F) -> Result<LambdaElement, EngineError>
where
    F: Fn(&ADatum) -> Result<LambdaElement, EngineError> + Sync + Send,
{
    let terms: Vec<LambdaElement> = items.par_iter().map(f).collect::<Result<_, _>>()?;
    Ok(terms.into_iter().sum())
}

fn product(table: &InvariantTable, parts: &[KClass]) -> Result<LambdaElement, EngineError> {
    let mut acc = LambdaElement::one();
    for p in parts {
        acc = &acc * table.get(p)?;
    }
    Ok(acc)
}

fn tau_constant(d: &ADatum, tau: &WeakStability) -> Result<bool, EngineError> {
    let t = tau.tau_of(&d.total())?;
    for p in d.parts() {
        if tau.tau_of(p)? != t {
            return Ok(false);
        }
    }
    Ok(true)
}

fn q_of(n: i64, d: u64) -> Q {
    Q::new(n.into(), d.into())
}

/// J from I_ss: sum over decompositions with all parts of τ-value `τ(α)` of
/// `(-1)^(n-1)/n · (ℓ-1) · ℓ^twist · Π I_ss(κ(i))`.
pub fn j_from_iss(alpha: &KClass, tau: &WeakStability, iss: &InvariantTable, chi: &EulerPairing, en: &dyn Enumerator) -> Result<LambdaElement, EngineError> {
    let decs = en.decompositions(alpha)?;
    par_sum(&decs, |d| {
        if !tau_constant(d, tau)? {
            return Ok(LambdaElement::zero());
        }
        let n = d.len();
        let c = q_of(if n % 2 == 1 { 1 } else { -1 }, n as u64);
        Ok(product(iss, d.parts())?.mul_ell_pow(chi.twist(d.parts())).scale(&c) * LambdaElement::ell_k_minus_one_pow(1, 1))
    })
}

/// I_ss from J: the inverse transform, weight `(ℓ-1)^(-n)/n!`.
pub fn iss_from_j(alpha: &KClass, tau: &WeakStability, j: &InvariantTable, chi: &EulerPairing, en: &dyn Enumerator) -> Result<LambdaElement, EngineError> {
    let decs = en.decompositions(alpha)?;
    par_sum(&decs, |d| {
        if !tau_constant(d, tau)? {
            return Ok(LambdaElement::zero());
        }
        let n = d.len();
        let c = q_of(1, factorial(n));
        Ok(product(j, d.parts())?.mul_ell_pow(chi.twist(d.parts())).scale(&c) * LambdaElement::ell_k_minus_one_pow(1, -(n as i64)))
    })
}

/// Configuration invariant `ℓ^(-Σ_{i≠j, i⪯j} χ(κ(j), κ(i))) · Π I_ss(κ(i))`.
pub fn iss_config(poset: &Poset, kappa: &[KClass], iss: &InvariantTable, chi: &EulerPairing) -> Result<LambdaElement, EngineError> {
    if kappa.len() != poset.len() {
        return Err(EngineError::Shape(format!("κ has {} entries for a poset on {} points", kappa.len(), poset.len())));
    }
    let mut e = 0;
    for i in 0..poset.len() {
        for j in 0..poset.len() {
            if i != j && poset.leq(i, j) {
                e -= chi.eval(&kappa[j], &kappa[i]);
            }
        }
    }
    Ok(product(iss, kappa)?.mul_ell_pow(e))
}

/// I_ss at τ̃ from I_ss at τ: `Σ S(κ, τ, τ̃) · ℓ^twist · Π I_ss(κ(i), τ)`.
pub fn wallcross_iss(
    alpha: &KClass,
    tau: &WeakStability,
    ttau: &WeakStability,
    iss: &InvariantTable,
    chi: &EulerPairing,
    en: &dyn Enumerator,
) -> Result<LambdaElement, EngineError> {
    let decs = en.decompositions(alpha)?;
    par_sum(&decs, |d| {
        let s = s_coeff(d, tau, ttau)?;
        if s == 0 {
            return Ok(LambdaElement::zero());
        }
        Ok(product(iss, d.parts())?.mul_ell_pow(chi.twist(d.parts())).scale(&Q::from_integer(s.into())))
    })
}

/// J at τ̃ from J at τ: `Σ U(κ, τ, τ̃) · ℓ^twist · (ℓ-1)^(1-n) · Π J(κ(i), τ)`.
pub fn wallcross_j(
    alpha: &KClass,
    tau: &WeakStability,
    ttau: &WeakStability,
    j: &InvariantTable,
    chi: &EulerPairing,
    en: &dyn Enumerator,
) -> Result<LambdaElement, EngineError> {
    let decs = en.decompositions(alpha)?;
    par_sum(&decs, |d| {
        let u = u_coeff(d, tau, ttau)?;
        if u.is_zero() {
            return Ok(LambdaElement::zero());
        }
        let n = d.len() as i64;
        Ok(product(j, d.parts())?.mul_ell_pow(chi.twist(d.parts())).scale(&u) * LambdaElement::ell_k_minus_one_pow(1, 1 - n))
    })
}

fn omega_of(table: &InvariantTable, k: &KClass) -> Result<Q, EngineError> {
    let v = table.get(k)?;
    v.project_omega().map(|o| o.0).map_err(|_| EngineError::NotInLambdaZero(k.clone()))
}

/// Ω-level transform through tree sums weighted by χ̄ along the edges.
pub fn wallcross_j_omega(
    alpha: &KClass,
    tau: &WeakStability,
    ttau: &WeakStability,
    j_omega: &InvariantTable,
    chibar: &AntisymmetrizedPairing,
    en: &dyn Enumerator,
    mode: TreeSumMode,
) -> Result<OmegaValue, EngineError> {
    let decs = en.decompositions(alpha)?;
    let max_n = decs.iter().map(ADatum::len).max().unwrap_or(1);
    let trees: Vec<Vec<crate::coefficients::Digraph>> = (0..=max_n)
        .map(|n| {
            if n == 0 {
                Vec::new()
            } else {
                enumerate_trees(n, match mode {
                    TreeSumMode::Tree48 => TreeMode::Oriented,
                    TreeSumMode::Increasing49 => TreeMode::Increasing,
                })
            }
        })
        .collect();
    let terms: Vec<Q> = decs
        .par_iter()
        .map(|d| -> Result<Q, EngineError> {
            let n = d.len();
            let kappa = d.parts();
            let mut jprod = Q::from_integer(1.into());
            for k in kappa {
                jprod *= omega_of(j_omega, k)?;
            }
            if jprod.is_zero() {
                return Ok(Q::zero());
            }
            let pow2 = Q::from_integer(num_bigint::BigInt::from(2u32).pow((n - 1) as u32));
            let mut acc = Q::zero();
            match mode {
                TreeSumMode::Increasing49 => {
                    let u = u_coeff(d, tau, ttau)?;
                    if u.is_zero() {
                        return Ok(Q::zero());
                    }
                    for g in &trees[n] {
                        let w: i64 = g.edges().iter().map(|&(a, b)| chibar.eval(&kappa[a], &kappa[b])).product();
                        acc += Q::from_integer(w.into());
                    }
                    acc = acc * u / pow2;
                }
                TreeSumMode::Tree48 => {
                    // U on every reordering of κ, shared across trees.
                    let mut ucache: HashMap<Vec<usize>, Q> = HashMap::new();
                    for p in permutations(n) {
                        let u = u_coeff(&d.reordered(&p), tau, ttau)?;
                        ucache.insert(p, u);
                    }
                    for g in &trees[n] {
                        let w: i64 = g.edges().iter().map(|&(a, b)| chibar.eval(&kappa[a], &kappa[b])).product();
                        if w == 0 {
                            continue;
                        }
                        let poset = Poset::from_relations(n, g.edges())?;
                        let mut usum = Q::zero();
                        for ext in poset.linear_extensions() {
                            usum += &ucache[&ext];
                        }
                        acc += usum * Q::from_integer(w.into());
                    }
                    acc = acc / (pow2 * Q::from_integer(factorial(n).into()));
                }
            }
            Ok(acc * jprod)
        })
        .collect::<Result<_, _>>()?;
    Ok(OmegaValue(terms.into_iter().fold(Q::zero(), |a, b| a + b)))
}

/// Apply a per-class transform to every class of a table.
pub fn transform_table<F>(table: &InvariantTable, flavor: Flavor, f: F) -> Result<InvariantTable, EngineError>
where
    F: Fn(&KClass) -> Result<LambdaElement, EngineError>,
{
    let mut out = InvariantTable::new(flavor);
    for k in table.classes() {
        out.insert(k.clone(), f(k)?);
    }
    Ok(out)
}

/// Largest `|I|` accepted by [`wallcross_config`].
pub const CONFIG_MAX_POINTS: usize = 5;
/// Largest `|K|` accepted by [`wallcross_config`].
pub const CONFIG_MAX_TARGET: usize = 3;

/// Configuration transform: `I_ss(K, ⊴, μ, τ̃)` as the sum over labelled
/// finite posets `(I, ⪯)`, weighted `1/|I|!`, and maps `κ, φ` with
/// `(I, ⪯, K, φ)` dominant inducing `⊴` and `κ(φ⁻¹(k)) = μ(k)`, of
/// `T(I, ⪯, κ, K, φ, τ, τ̃) · I_ss(I, ⪯, κ, τ)`.
///
/// Only nonnegative-cone lattices are supported; `|I|` is bounded by the total
/// size of `μ`, which must not exceed [`CONFIG_MAX_POINTS`].
pub fn wallcross_config(
    k_poset: &Poset,
    mu: &[KClass],
    tau: &WeakStability,
    ttau: &WeakStability,
    iss: &InvariantTable,
    chi: &EulerPairing,
) -> Result<LambdaElement, EngineError> {
    let k = k_poset.len();
    if k == 0 || k > CONFIG_MAX_TARGET {
        return Err(EngineError::Guard(format!("|K| = {k} outside 1..={CONFIG_MAX_TARGET}")));
    }
    if mu.len() != k {
        return Err(EngineError::Shape(format!("μ has {} entries for |K| = {k}", mu.len())));
    }
    if mu.iter().any(|m| !Cone::Nonnegative.contains(m)) {
        return Err(EngineError::Shape("μ must lie in the nonnegative cone".into()));
    }
    let size: i64 = mu.iter().map(|m| m.0.iter().sum::<i64>()).sum();
    let size = size as usize;
    if size > CONFIG_MAX_POINTS {
        return Err(EngineError::Guard(format!("total size {size} exceeds {CONFIG_MAX_POINTS}")));
    }
    let mut total = LambdaElement::zero();
    for n in k..=size {
        let mut acc = LambdaElement::zero();
        for poset in Poset::all(n) {
            for phi in surjections(n, k) {
                let Some(induced) = is_dominant(&poset, k, &phi)? else { continue };
                if induced != *k_poset {
                    continue;
                }
                let fibers: Vec<Vec<usize>> = (0..k)
                    .map(|f| poset.sorted_chain(&(0..n).filter(|&i| phi[i] == f).collect::<Vec<_>>()).expect("dominant fibers are chains"))
                    .collect();
                let mut options: Vec<Vec<ADatum>> = Vec::with_capacity(k);
                for (f, fib) in fibers.iter().enumerate() {
                    let decs: Vec<ADatum> = enumerate_decompositions(&mu[f], Cone::Nonnegative, Some(fib.len()))?.into_iter().filter(|d| d.len() == fib.len()).collect();
                    options.push(decs);
                }
                let mut choice = vec![0usize; k];
                if options.iter().any(Vec::is_empty) {
                    continue;
                }
                loop {
                    let mut kappa = vec![KClass::zero(mu[0].dim()); n];
                    for f in 0..k {
                        for (pos, &i) in fibers[f].iter().enumerate() {
                            kappa[i] = options[f][choice[f]].parts()[pos].clone();
                        }
                    }
                    let t = t_coeff(&poset, &kappa, k, &phi, tau, ttau)?;
                    if t != 0 {
                        acc = &acc + &iss_config(&poset, &kappa, iss, chi)?.scale(&Q::from_integer(t.into()));
                    }
                    let mut f = 0;
                    while f < k {
                        choice[f] += 1;
                        if choice[f] < options[f].len() {
                            break;
                        }
                        choice[f] = 0;
                        f += 1;
                    }
                    if f == k {
                        break;
                    }
                }
            }
        }
        total = &total + &acc.scale(&q_of(1, factorial(n)));
    }
    Ok(total)
}
