use std::fmt;
use std::str::FromStr;

use super::kclass::{Cone, KClass};
use super::stability::{TauValue, WeakStability};
use super::StabilityError;

/// Totally ordered A-data `({1..n}, <=, κ)`: an ordered list of positive classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ADatum {
    parts: Vec<KClass>,
}

impl ADatum {
    pub fn new(parts: Vec<KClass>) -> Result<Self, StabilityError> {
        if parts.is_empty() {
            return Err(StabilityError::EmptyDatum);
        }
        let d = parts[0].dim();
        if let Some(p) = parts.iter().find(|p| p.dim() != d) {
            return Err(StabilityError::DimensionMismatch { expected: d, got: p.dim() });
        }
        Ok(ADatum { parts })
    }

    pub fn parts(&self) -> &[KClass] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> KClass {
        KClass::sum(&self.parts)
    }

    /// `κ(i) + .. + κ(j-1)` (zero-based, half open).
    pub fn interval(&self, i: usize, j: usize) -> KClass {
        KClass::sum(&self.parts[i..j])
    }

    /// `κ(J)` for an arbitrary index set.
    pub fn subset_sum(&self, idx: &[usize]) -> KClass {
        let v: Vec<KClass> = idx.iter().map(|&i| self.parts[i].clone()).collect();
        KClass::sum(&v)
    }

    pub fn reordered(&self, order: &[usize]) -> ADatum {
        ADatum { parts: order.iter().map(|&i| self.parts[i].clone()).collect() }
    }

    /// Merge consecutive blocks of the given sizes into single parts.
    pub fn merge_blocks(&self, blocks: &[usize]) -> ADatum {
        let mut parts = Vec::with_capacity(blocks.len());
        let mut start = 0;
        for &b in blocks {
            parts.push(self.interval(start, start + b));
            start += b;
        }
        ADatum { parts }
    }

    pub fn slice(&self, i: usize, j: usize) -> ADatum {
        ADatum { parts: self.parts[i..j].to_vec() }
    }
}

impl fmt::Display for ADatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.parts.iter().map(|p| format!("[{}]", p.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))).collect();
        f.write_str(&inner.join(";"))
    }
}

impl FromStr for ADatum {
    type Err = StabilityError;

    /// Parses `[1,0];[0,1]`.
    fn from_str(s: &str) -> Result<Self, StabilityError> {
        let mut parts = Vec::new();
        for chunk in s.split(';') {
            let t = chunk.trim().trim_start_matches('[').trim_end_matches(']');
            let coords: Result<Vec<i64>, _> = t.split(',').map(|x| x.trim().parse::<i64>()).collect();
            parts.push(KClass(coords.map_err(|_| StabilityError::Parse(format!("bad class {chunk:?}")))?));
        }
        ADatum::new(parts)
    }
}

/// The two order predicates on an A-datum under one stability condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ADataPredicates {
    /// `τ(κ(1..i)) <= τ(κ(i+1..n))` for every proper prefix.
    pub semistable: bool,
    /// `τ∘κ` strictly decreasing.
    pub reversing: bool,
}

pub fn adata_predicates(d: &ADatum, stab: &WeakStability) -> Result<ADataPredicates, StabilityError> {
    let n = d.len();
    let taus: Vec<TauValue> = d.parts.iter().map(|p| stab.tau_of(p)).collect::<Result<_, _>>()?;
    let reversing = taus.windows(2).all(|w| w[0] > w[1]);
    let mut semistable = true;
    for i in 1..n {
        if stab.tau_of(&d.interval(0, i))? > stab.tau_of(&d.interval(i, n))? {
            semistable = false;
            break;
        }
    }
    Ok(ADataPredicates { semistable, reversing })
}

/// `τ(κ(1..i)) > τ(κ(i+1..n))` for every proper prefix.
pub fn prefix_exceeds_suffix(d: &ADatum, stab: &WeakStability) -> Result<bool, StabilityError> {
    let n = d.len();
    for i in 1..n {
        if stab.tau_of(&d.interval(0, i))? <= stab.tau_of(&d.interval(i, n))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `τ(κ(1..i)) > τ(α)` for every proper prefix, `α` the total class.
pub fn prefix_exceeds_total(d: &ADatum, stab: &WeakStability) -> Result<bool, StabilityError> {
    let n = d.len();
    let ta = stab.tau_of(&d.total())?;
    for i in 1..n {
        if stab.tau_of(&d.interval(0, i))? <= ta {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every ordered decomposition of `α` into positive classes, optionally with at
/// most `n_max` parts, in lexicographic order of part lists.
pub fn enumerate_decompositions(alpha: &KClass, cone: Cone, n_max: Option<usize>) -> Result<Vec<ADatum>, StabilityError> {
    if cone != Cone::Nonnegative {
        return Err(StabilityError::InfiniteDecomposition);
    }
    if !cone.contains(alpha) {
        return Err(StabilityError::NotInCone(alpha.clone()));
    }
    let subs = sub_vectors(alpha);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    decompose(alpha, &subs, n_max.unwrap_or(usize::MAX), &mut cur, &mut out);
    out.sort();
    Ok(out)
}

/// All nonzero `β <= α` componentwise.
fn sub_vectors(alpha: &KClass) -> Vec<KClass> {
    let mut out = vec![KClass::zero(alpha.dim())];
    for (v, &a) in alpha.0.iter().enumerate() {
        let mut next = Vec::new();
        for base in &out {
            for x in 0..=a {
                let mut b = base.clone();
                b.0[v] = x;
                next.push(b);
            }
        }
        out = next;
    }
    out.retain(|b| !b.is_zero());
    out
}

fn decompose(rest: &KClass, subs: &[KClass], budget: usize, cur: &mut Vec<KClass>, out: &mut Vec<ADatum>) {
    if budget == 0 {
        return;
    }
    for b in subs {
        if b.0.iter().zip(&rest.0).all(|(x, y)| x <= y) {
            let r = rest - b;
            cur.push(b.clone());
            if r.is_zero() {
                out.push(ADatum { parts: cur.clone() });
            } else {
                decompose(&r, subs, budget - 1, cur, out);
            }
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: &[i64]) -> KClass {
        KClass(v.to_vec())
    }

    fn binom(n: i64, r: i64) -> i64 {
        if r < 0 || r > n {
            return 0;
        }
        let mut acc = 1i64;
        for i in 0..r {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    /// Inclusion-exclusion count of ordered decompositions into `m` nonzero parts.
    fn count_compositions(alpha: &[i64]) -> i64 {
        let size: i64 = alpha.iter().sum();
        let mut total = 0;
        for m in 1..=size {
            let mut c = 0;
            for j in 0..=m {
                let free = m - j;
                let ways: i64 = if free == 0 { i64::from(alpha.iter().all(|&a| a == 0)) } else { alpha.iter().map(|&a| binom(a + free - 1, free - 1)).product() };
                c += if j % 2 == 0 { 1 } else { -1 } * binom(m, j) * ways;
            }
            total += c;
        }
        total
    }

    #[test]
    fn kronecker_decompositions() {
        let d = enumerate_decompositions(&k(&[1, 1]), Cone::Nonnegative, None).unwrap();
        let s: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, vec!["[0,1];[1,0]", "[1,0];[0,1]", "[1,1]"]);
        assert_eq!(enumerate_decompositions(&k(&[1, 0]), Cone::Nonnegative, None).unwrap().len(), 1);
        let two = enumerate_decompositions(&k(&[2, 0]), Cone::Nonnegative, None).unwrap();
        assert_eq!(two.len(), 2);
    }

    #[test]
    fn decomposition_counts_match_inclusion_exclusion() {
        for alpha in [vec![1, 1], vec![2, 1], vec![3], vec![2, 2], vec![1, 1, 1], vec![3, 2], vec![5], vec![1, 2, 2]] {
            let d = enumerate_decompositions(&KClass(alpha.clone()), Cone::Nonnegative, None).unwrap();
            let mut dedup = d.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), d.len(), "duplicates for {alpha:?}");
            assert_eq!(d.len() as i64, count_compositions(&alpha), "count for {alpha:?}");
            assert!(d.iter().all(|x| x.total() == KClass(alpha.clone())));
        }
    }

    #[test]
    fn curve_lattice_needs_bound() {
        assert!(matches!(enumerate_decompositions(&k(&[1, 0]), Cone::Curve, None), Err(StabilityError::InfiniteDecomposition)));
    }

    #[test]
    fn predicate_examples() {
        let s = WeakStability::slope(vec![1, 0], vec![1, 1]);
        let single: ADatum = "[1,1]".parse().unwrap();
        assert_eq!(adata_predicates(&single, &s).unwrap(), ADataPredicates { semistable: true, reversing: true });
        let a: ADatum = "[1,0];[0,1]".parse().unwrap();
        assert_eq!(adata_predicates(&a, &s).unwrap(), ADataPredicates { semistable: false, reversing: true });
        let b: ADatum = "[0,1];[1,0]".parse().unwrap();
        assert_eq!(adata_predicates(&b, &s).unwrap(), ADataPredicates { semistable: true, reversing: false });
    }

    #[test]
    fn prefix_predicates_agree_under_seesaw() {
        let s = WeakStability::slope(vec![2, -1, 1], vec![1, 1, 2]);
        for d in enumerate_decompositions(&k(&[2, 1, 2]), Cone::Nonnegative, None).unwrap() {
            assert_eq!(prefix_exceeds_suffix(&d, &s).unwrap(), prefix_exceeds_total(&d, &s).unwrap());
        }
    }
}
