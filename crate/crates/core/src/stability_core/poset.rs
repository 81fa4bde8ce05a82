use super::StabilityError;

/// Finite partial order on `{0, .., n-1}` stored as a dense relation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    rel: Vec<bool>,
}

impl Poset {
    /// Build from a full relation matrix, checking the partial-order axioms.
    pub fn new(n: usize, rel: Vec<bool>) -> Result<Self, StabilityError> {
        if rel.len() != n * n {
            return Err(StabilityError::InvalidPoset(format!("relation matrix has {} entries, expected {}", rel.len(), n * n)));
        }
        let p = Poset { n, rel };
        for i in 0..n {
            if !p.leq(i, i) {
                return Err(StabilityError::InvalidPoset(format!("not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && p.leq(i, j) && p.leq(j, i) {
                    return Err(StabilityError::InvalidPoset(format!("not antisymmetric at ({i},{j})")));
                }
                for k in 0..n {
                    if p.leq(i, j) && p.leq(j, k) && !p.leq(i, k) {
                        return Err(StabilityError::InvalidPoset(format!("not transitive at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(p)
    }

    /// Smallest partial order containing the given pairs `i <= j`.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self, StabilityError> {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(StabilityError::InvalidPoset(format!("pair ({i},{j}) out of range")));
            }
            rel[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i * n + k] {
                    for j in 0..n {
                        if rel[k * n + j] {
                            rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Poset::new(n, rel)
    }

    /// `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Self {
        let rel = (0..n * n).map(|x| x / n <= x % n).collect();
        Poset { n, rel }
    }

    pub fn antichain(n: usize) -> Self {
        let rel = (0..n * n).map(|x| x / n == x % n).collect();
        Poset { n, rel }
    }

    /// Total order listing elements from least to greatest.
    pub fn total(order: &[usize]) -> Self {
        let n = order.len();
        let mut pos = vec![0; n];
        for (p, &e) in order.iter().enumerate() {
            pos[e] = p;
        }
        let rel = (0..n * n).map(|x| pos[x / n] <= pos[x % n]).collect();
        Poset { n, rel }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.n + j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn is_total(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.comparable(i, j)))
    }

    /// Elements of `subset` listed in increasing order, when the restriction is total.
    pub fn sorted_chain(&self, subset: &[usize]) -> Option<Vec<usize>> {
        let mut v = subset.to_vec();
        for &a in subset {
            for &b in subset {
                if !self.comparable(a, b) {
                    return None;
                }
            }
        }
        v.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if self.leq(a, b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        Some(v)
    }

    /// Every total order extending this one, each listed least to greatest.
    pub fn linear_extensions(&self) -> Vec<Vec<usize>> {
        fn rec(p: &Poset, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == p.n {
                out.push(cur.clone());
                return;
            }
            for i in 0..p.n {
                if used[i] {
                    continue;
                }
                let minimal = (0..p.n).all(|j| used[j] || j == i || !p.leq(j, i));
                if minimal {
                    used[i] = true;
                    cur.push(i);
                    rec(p, used, cur, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(self, &mut vec![false; self.n], &mut Vec::new(), &mut out);
        out
    }

    /// Every labelled partial order on `n` elements (feasible for `n <= 4`).
    pub fn all(n: usize) -> Vec<Poset> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << pairs.len()) {
            let mut rel = vec![false; n * n];
            for i in 0..n {
                rel[i * n + i] = true;
            }
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    rel[i * n + j] = true;
                }
            }
            if let Ok(p) = Poset::new(n, rel) {
                out.push(p);
            }
        }
        out
    }
}

/// The order induced on `K` by a dominant quadruple `(I, ⪯, K, φ)`.
///
/// Returns `None` unless every fiber is totally ordered and, across distinct
/// fibers, `i ⪯ j` depends only on the pair of fibers and defines a partial
/// order on `K`.
pub fn is_dominant(poset: &Poset, k: usize, phi: &[usize]) -> Result<Option<Poset>, StabilityError> {
    if phi.len() != poset.len() || phi.iter().any(|&x| x >= k) {
        return Err(StabilityError::InvalidPoset("map does not send I into K".into()));
    }
    let mut hit = vec![false; k];
    for &x in phi {
        hit[x] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(StabilityError::NonSurjective);
    }
    let n = poset.len();
    for i in 0..n {
        for j in 0..n {
            if phi[i] == phi[j] && !poset.comparable(i, j) {
                return Ok(None);
            }
        }
    }
    let mut rel = vec![false; k * k];
    for a in 0..k {
        rel[a * k + a] = true;
    }
    for i in 0..n {
        for j in 0..n {
            if phi[i] != phi[j] && poset.leq(i, j) {
                rel[phi[i] * k + phi[j]] = true;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if phi[i] != phi[j] && poset.leq(i, j) != rel[phi[i] * k + phi[j]] {
                return Ok(None);
            }
        }
    }
    Ok(Poset::new(k, rel).ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::surjections;

    #[test]
    fn poset_counts() {
        // Labelled posets on 0..4 points: 1, 1, 3, 19, 219.
        let counts: Vec<usize> = (0..=4).map(|n| Poset::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn dominance_examples() {
        let chain = Poset::chain(2);
        let k = is_dominant(&chain, 1, &[0, 0]).unwrap().unwrap();
        assert_eq!(k.len(), 1);
        assert!(is_dominant(&Poset::antichain(2), 1, &[0, 0]).unwrap().is_none());
        let t = is_dominant(&chain, 2, &[0, 1]).unwrap().unwrap();
        assert!(t.leq(0, 1) && !t.leq(1, 0));
        assert!(matches!(is_dominant(&chain, 3, &[0, 1]), Err(StabilityError::NonSurjective)));
    }

    #[test]
    fn dominance_is_order_preserving() {
        for n in 1..=4 {
            for p in Poset::all(n) {
                for k in 1..=n {
                    for phi in surjections(n, k) {
                        if let Some(kp) = is_dominant(&p, k, &phi).unwrap() {
                            for i in 0..n {
                                for j in 0..n {
                                    if p.leq(i, j) {
                                        assert!(kp.leq(phi[i], phi[j]));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn linear_extension_count() {
        assert_eq!(Poset::antichain(3).linear_extensions().len(), 6);
        assert_eq!(Poset::chain(4).linear_extensions(), vec![vec![0, 1, 2, 3]]);
        let v = Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(v.linear_extensions().len(), 2);
    }

    #[test]
    fn invalid_relations_rejected() {
        assert!(Poset::from_relations(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Poset::new(2, vec![true, false, false, false]).is_err());
    }
}
