use super::QuiverError;

/// A finite field `F_q` with elements `0..q`, addition and multiplication by table.
///
/// Prime `q` uses residues; `q = 4` uses `F_2[x]/(x^2+x+1)` with `x` encoded as 2.
#[derive(Clone, Debug)]
pub struct FiniteField {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self, QuiverError> {
        if q > 255 {
            return Err(QuiverError::UnsupportedField(q));
        }
        let (add, mul): (Vec<u8>, Vec<u8>) = if is_prime(q) {
            let add = (0..q * q).map(|x| ((x / q + x % q) % q) as u8).collect();
            let mul = (0..q * q).map(|x| ((x / q) * (x % q) % q) as u8).collect();
            (add, mul)
        } else if q == 4 {
            let add = (0..16).map(|x| ((x / 4) ^ (x % 4)) as u8).collect();
            let mul = (0..16)
                .map(|x| {
                    let (a, b) = (x / 4, x % 4);
                    // Carry-less product, then reduce x^2 = x + 1.
                    let mut p = 0;
                    for i in 0..2 {
                        if b >> i & 1 == 1 {
                            p ^= a << i;
                        }
                    }
                    if p & 4 != 0 {
                        p ^= 0b111;
                    }
                    p as u8
                })
                .collect();
            (add, mul)
        } else {
            return Err(QuiverError::UnsupportedField(q));
        };
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).expect("additive inverse") as u8).collect();
        Ok(FiniteField { q, add, mul, neg })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (1..self.q as u8).find(|&b| self.mul(a, b) == 1)
    }
}

/// Encode a vector in `F_q^m` as an integer in base `q`, first coordinate lowest.
pub fn encode(v: &[u8], q: usize) -> usize {
    v.iter().rev().fold(0, |acc, &c| acc * q + c as usize)
}

pub fn decode(mut idx: usize, m: usize, q: usize) -> Vec<u8> {
    let mut v = Vec::with_capacity(m);
    for _ in 0..m {
        v.push((idx % q) as u8);
        idx /= q;
    }
    v
}

/// A subspace of `F_q^m`: a basis in reduced row echelon form and the
/// indicator of its members.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub dim: usize,
    pub basis: Vec<usize>,
    pub members: Vec<bool>,
}

/// All subspaces of `F_q^m` of dimension `k`, one per RREF basis.
pub fn subspaces(field: &FiniteField, m: usize, k: usize) -> Vec<Subspace> {
    let q = field.order();
    let size = q.pow(m as u32);
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    for pivots in k_subsets(m, k) {
        // Free entries in row r: columns after pivot r that are not pivots.
        let free: Vec<(usize, usize)> =
            (0..k).flat_map(|r| ((pivots[r] + 1)..m).filter(|c| !pivots.contains(c)).map(move |c| (r, c))).collect();
        let count = q.pow(free.len() as u32);
        for code in 0..count {
            let mut rows = vec![vec![0u8; m]; k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            let vals = decode(code, free.len(), q);
            for (&(r, c), &v) in free.iter().zip(&vals) {
                rows[r][c] = v;
            }
            let mut members = vec![false; size];
            for comb in 0..q.pow(k as u32) {
                let coeffs = decode(comb, k, q);
                let mut v = vec![0u8; m];
                for (row, &c) in rows.iter().zip(&coeffs) {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = field.add(*x, field.mul(c, y));
                    }
                }
                members[encode(&v, q)] = true;
            }
            out.push(Subspace { dim: k, basis: rows.iter().map(|r| encode(r, q)).collect(), members });
        }
    }
    out
}

fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// `|GL(m, F_q)| = Π_{k<m} (q^m - q^k)`.
pub fn gl_order(m: usize, q: u64) -> u128 {
    (0..m as u32).map(|k| (q.pow(m as u32) - q.pow(k)) as u128).product()
}
