use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::combinat::permutations;
use crate::lambda_ring::Q;
use crate::stability_core::{ADatum, KClass, WeakStability};

use super::u::u_coeff;
use super::CoeffError;

/// A linear combination of words in which each of the letters `0..n` appears
/// exactly once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultilinearWordSum {
    n: usize,
    terms: BTreeMap<Vec<usize>, Q>,
}

impl MultilinearWordSum {
    pub fn new(n: usize) -> Self {
        MultilinearWordSum { n, terms: BTreeMap::new() }
    }

    pub fn letters(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_word(&mut self, word: Vec<usize>, c: Q) -> Result<(), CoeffError> {
        let mut sorted = word.clone();
        sorted.sort_unstable();
        if sorted != (0..self.n).collect::<Vec<_>>() {
            return Err(CoeffError::NotMultilinear(format!("{word:?}")));
        }
        add_into(&mut self.terms, word, c);
        Ok(())
    }

    /// Image under the left-normed bracketing `w1..wn -> [..[[w1, w2], w3].., wn]`.
    pub fn left_bracketing(&self) -> MultilinearWordSum {
        let mut out = BTreeMap::new();
        for (w, c) in &self.terms {
            for (v, s) in bracket_word(w) {
                add_into(&mut out, v, Q::from_integer(s.into()) * c);
            }
        }
        MultilinearWordSum { n: self.n, terms: out }
    }

    /// A multilinear element lies in the free Lie algebra iff bracketing
    /// multiplies it by its degree.
    pub fn lie_membership(&self) -> bool {
        let mut scaled = self.clone();
        for c in scaled.terms.values_mut() {
            *c *= Q::from_integer((self.n as i64).into());
        }
        self.left_bracketing() == scaled
    }
}

fn add_into(m: &mut BTreeMap<Vec<usize>, Q>, w: Vec<usize>, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = m.entry(w.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        m.remove(&w);
    }
}

fn bracket_word(w: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let mut acc: Vec<(Vec<usize>, i64)> = vec![(w[..1.min(w.len())].to_vec(), 1)];
    for &x in w.iter().skip(1) {
        let mut next = Vec::with_capacity(acc.len() * 2);
        for (p, s) in acc {
            let mut right = p.clone();
            right.push(x);
            next.push((right, s));
            let mut left = vec![x];
            left.extend(p);
            next.push((left, -s));
        }
        acc = next;
    }
    acc
}

impl fmt::Display for MultilinearWordSum {
    /// Letters print as `x1, x2, ..`; words are juxtaposed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{c}*{}", w.iter().map(|l| format!("x{}", l + 1)).collect::<Vec<_>>().join("")))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `Σ_σ U(κ∘σ, τ, τ̃) · x_σ(1)..x_σ(n)`.
pub fn u_word_sum(kappa: &[KClass], tau: &WeakStability, ttau: &WeakStability) -> Result<MultilinearWordSum, CoeffError> {
    let n = kappa.len();
    let mut out = MultilinearWordSum::new(n);
    for sigma in permutations(n) {
        let d = ADatum::new(sigma.iter().map(|&i| kappa[i].clone()).collect())?;
        let u = u_coeff(&d, tau, ttau)?;
        out.add_word(sigma, u)?;
    }
    Ok(out)
}
