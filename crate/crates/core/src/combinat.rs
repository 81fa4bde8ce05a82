//! Small enumeration helpers shared by the coefficient and engine code.

/// Every composition of `n` (ordered list of positive block sizes).
///
/// A composition is the same thing as a monotone surjection
/// `{1..n} -> {1..m}`, read off by block sizes.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut blocks = Vec::new();
        let mut size = 1;
        for b in 0..n - 1 {
            if mask >> b & 1 == 1 {
                blocks.push(size);
                size = 1;
            } else {
                size += 1;
            }
        }
        blocks.push(size);
        out.push(blocks);
    }
    out
}

/// Block sizes to cut points `0 = c_0 < c_1 < .. < c_m = n`.
pub fn cuts(blocks: &[usize]) -> Vec<usize> {
    let mut c = Vec::with_capacity(blocks.len() + 1);
    c.push(0);
    for b in blocks {
        c.push(c.last().copied().unwrap_or(0) + b);
    }
    c
}

/// Every surjection `{0..n} -> {0..k}` as a value vector.
pub fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let total = (k as u64).pow(n as u32);
    for mut code in 0..total {
        let mut phi = vec![0; n];
        for x in phi.iter_mut() {
            *x = (code % k as u64) as usize;
            code /= k as u64;
        }
        let mut hit = vec![false; k];
        for &x in &phi {
            hit[x] = true;
        }
        if hit.iter().all(|h| *h) {
            out.push(phi);
        }
    }
    out
}

/// Every permutation of `0..n`, lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(compositions(4).len(), 8);
        assert_eq!(compositions(1), vec![vec![1]]);
        // Surjections 4 -> 2: 2^4 - 2.
        assert_eq!(surjections(4, 2).len(), 14);
        assert_eq!(surjections(3, 3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(cuts(&[2, 1, 3]), vec![0, 2, 3, 6]);
    }
}
