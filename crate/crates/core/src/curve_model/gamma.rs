use std::collections::HashMap;
use std::sync::RwLock;

use num_traits::Signed;

use super::{check_rank_genus, coprime, iss_delta, CurveError};
use crate::combinat::compositions;
use crate::lambda_ring::{Poly, TruncatedSeries, Q};

/// Which degree tuples a rank composition admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleRule {
    /// `d_1/n_1 > .. > d_k/n_k` (Harder-Narasimhan types).
    DecreasingSlopes,
    /// `(d_1+..+d_i)/(n_1+..+n_i) > d/n` for every proper prefix.
    PrefixAboveTotal,
}

/// Which computation supplies the Gieseker invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaPath {
    Recursion,
    Direct,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

/// Upper bound `2(g-1)n²` on the z-degree of a rank-`n` invariant.
fn top_bound(n: i64, g: i64) -> i64 {
    2 * (g - 1) * n * n
}

/// Half the z-exponent of the twist, `Σ_{i<j} (n_i d_j - d_i n_j + (g-1) n_i n_j)`.
fn twist(ranks: &[i64], degs: &[i64], g: i64) -> i64 {
    let mut s = 0;
    for i in 0..ranks.len() {
        for j in i + 1..ranks.len() {
            s += ranks[i] * degs[j] - degs[i] * ranks[j] + (g - 1) * ranks[i] * ranks[j];
        }
    }
    s
}

/// Degree tuples `(d_1..d_k)` summing to `d` admitted by `rule` whose summand
/// `z^{2·twist} Π X_i`, with each `X_i` of degree at most `2(g-1)n_i²`, can
/// reach exponent `floor`.
///
/// With `a_p = N_p d - n E_p` for prefix sums `N_p, E_p`, both rules force
/// `a_p <= -1`, and the cross part of the twist equals
/// `(1/n) Σ_p a_p (n_p + n_{p+1})`. Each `a_p` is therefore bounded below by the
/// floor, and the enumeration below is complete.
pub fn degree_tuples(ranks: &[i64], d: i64, g: i64, floor: i64, rule: TupleRule) -> Vec<Vec<i64>> {
    let k = ranks.len();
    let n: i64 = ranks.iter().sum();
    if k == 1 {
        return vec![vec![d]];
    }
    let pair: i64 = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).map(|(i, j)| ranks[i] * ranks[j]).sum();
    let top_sum = 2 * (g - 1) * (n * n - pair);
    // Need 2·cross >= floor - top_sum.
    let need = floor - top_sum;
    let mut out = Vec::new();
    let mut prefix = vec![0i64; k + 1];
    prefix[k] = d;
    fn rec(p: usize, big_n: i64, ctx: &(&[i64], i64, i64, i64, usize), prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let (ranks, n, d, need, k) = *ctx;
        if p == k - 1 {
            out.push((0..k).map(|i| prefix[i + 1] - prefix[i]).collect());
            return;
        }
        let np = big_n + ranks[p];
        let w = ranks[p] + ranks[p + 1];
        let lo = ceil_div(n * need, 2 * w);
        for a in lo..=-1 {
            let num = np * d - a;
            if num % n != 0 {
                continue;
            }
            prefix[p + 1] = num / n;
            rec(p + 1, np, ctx, prefix, out);
        }
    }
    let ctx = (ranks, n, d, need, k);
    rec(0, 0, &ctx, &mut prefix, &mut out);
    out.retain(|degs| {
        let ok = match rule {
            TupleRule::DecreasingSlopes => (0..k - 1).all(|i| degs[i] * ranks[i + 1] > degs[i + 1] * ranks[i]),
            TupleRule::PrefixAboveTotal => {
                let (mut bn, mut be) = (0, 0);
                (0..k - 1).all(|i| {
                    bn += ranks[i];
                    be += degs[i];
                    be * n > d * bn
                })
            }
        };
        ok && 2 * twist(ranks, degs, g) + ranks.iter().map(|&r| top_bound(r, g)).sum::<i64>() >= floor
    });
    out
}

/// Exponents at which each factor must be known so that their product, shifted
/// by `z^{2·twist}`, is known down to `floor`.
fn factor_floors(ranks: &[i64], degs: &[i64], g: i64, floor: i64) -> (i64, Vec<i64>) {
    let tw = 2 * twist(ranks, degs, g);
    let tops: Vec<i64> = ranks.iter().map(|&r| top_bound(r, g)).collect();
    let total: i64 = tops.iter().sum();
    (tw, tops.iter().map(|t| floor - tw - (total - t)).collect())
}

/// Memoized Gieseker invariants on a genus `g` curve.
///
/// The cache keeps, per `(n, d)`, the deepest series computed so far; shallower
/// requests are served by truncation. Reads dominate, so it sits behind a
/// `RwLock` and may be shared across threads.
pub struct CurveEngine {
    genus: i64,
    cache: RwLock<HashMap<(i64, i64), TruncatedSeries>>,
}

impl CurveEngine {
    pub fn new(genus: i64) -> Result<Self, CurveError> {
        if genus < 0 {
            return Err(CurveError::BadGenus(genus));
        }
        Ok(CurveEngine { genus, cache: RwLock::new(HashMap::new()) })
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    fn product(&self, ranks: &[i64], degs: &[i64], floor: i64, path: Option<GammaPath>) -> Result<TruncatedSeries, CurveError> {
        let g = self.genus;
        let (tw, floors) = factor_floors(ranks, degs, g, floor);
        let mut acc = TruncatedSeries::from_z_poly(&Poly::one());
        for ((&r, &dd), &f) in ranks.iter().zip(degs).zip(&floors) {
            let x = match path {
                None => iss_delta(r, dd, g, f)?,
                Some(GammaPath::Recursion) => self.iss_gamma(r, dd, f)?,
                Some(GammaPath::Direct) => self.iss_gamma_direct(r, dd, f)?,
            };
            if x.top_degree().is_some_and(|t| t > top_bound(r, g)) {
                return Err(CurveError::Precision(format!("rank {r} invariant has degree above {}", top_bound(r, g))));
            }
            acc = &acc * &x;
        }
        Ok(acc.shift(tw))
    }

    /// Gieseker invariant of `(n, d)` down to `floor`, by removing every
    /// Harder-Narasimhan type with at least two pieces from the purity invariant.
    pub fn iss_gamma(&self, n: i64, d: i64, floor: i64) -> Result<TruncatedSeries, CurveError> {
        check_rank_genus(n, self.genus)?;
        if let Some(s) = self.cache.read().unwrap_or_else(|e| e.into_inner()).get(&(n, d)) {
            if s.floor().is_none_or(|f| f <= floor) {
                return Ok(s.truncate(floor));
            }
        }
        let g = self.genus;
        let mut acc = iss_delta(n, d, g, floor)?;
        for comp in compositions(n as usize) {
            if comp.len() < 2 {
                continue;
            }
            let ranks: Vec<i64> = comp.iter().map(|&c| c as i64).collect();
            for degs in degree_tuples(&ranks, d, g, floor, TupleRule::DecreasingSlopes) {
                let term = self.product(&ranks, &degs, floor, Some(GammaPath::Recursion))?;
                acc = &acc - &term;
            }
        }
        let acc = acc.truncate(floor);
        if acc.floor().is_some_and(|f| f > floor) {
            return Err(CurveError::Precision(format!("rank {n} degree {d} known only to z^{}", acc.floor().unwrap_or(floor))));
        }
        self.cache.write().unwrap_or_else(|e| e.into_inner()).insert((n, d), acc.clone());
        Ok(acc)
    }

    /// Gieseker invariant through the alternating sum of purity invariants over
    /// tuples whose prefixes have slope above `d/n`.
    pub fn iss_gamma_direct(&self, n: i64, d: i64, floor: i64) -> Result<TruncatedSeries, CurveError> {
        check_rank_genus(n, self.genus)?;
        let g = self.genus;
        let mut acc = TruncatedSeries::zero_to(floor);
        for comp in compositions(n as usize) {
            let ranks: Vec<i64> = comp.iter().map(|&c| c as i64).collect();
            for degs in degree_tuples(&ranks, d, g, floor, TupleRule::PrefixAboveTotal) {
                let term = self.product(&ranks, &degs, floor, None)?;
                acc = if ranks.len() % 2 == 1 { &acc + &term } else { &acc - &term };
            }
        }
        let acc = acc.truncate(floor);
        if acc.floor().is_some_and(|f| f > floor) {
            return Err(CurveError::Precision(format!("direct sum for ({n},{d}) known only to z^{}", acc.floor().unwrap_or(floor))));
        }
        Ok(acc)
    }

    /// The forward sum over Harder-Narasimhan types of twisted Gieseker
    /// products; it should reproduce the purity invariant.
    pub fn reconstruct_delta(&self, n: i64, d: i64, floor: i64, path: GammaPath) -> Result<TruncatedSeries, CurveError> {
        check_rank_genus(n, self.genus)?;
        let g = self.genus;
        let mut acc = TruncatedSeries::zero_to(floor);
        for comp in compositions(n as usize) {
            let ranks: Vec<i64> = comp.iter().map(|&c| c as i64).collect();
            for degs in degree_tuples(&ranks, d, g, floor, TupleRule::DecreasingSlopes) {
                acc = &acc + &self.product(&ranks, &degs, floor, Some(path))?;
            }
        }
        Ok(acc.truncate(floor))
    }
}

/// One-shot Gieseker invariant with a fresh cache.
pub fn iss_gamma(n: i64, d: i64, g: i64, floor: i64) -> Result<TruncatedSeries, CurveError> {
    CurveEngine::new(g)?.iss_gamma(n, d, floor)
}

/// One-shot direct-path Gieseker invariant.
pub fn iss_gamma_direct(n: i64, d: i64, g: i64, floor: i64) -> Result<TruncatedSeries, CurveError> {
    CurveEngine::new(g)?.iss_gamma_direct(n, d, floor)
}

/// One-shot forward reconstruction of the purity invariant.
pub fn reconstruct_delta(n: i64, d: i64, g: i64, floor: i64, path: GammaPath) -> Result<TruncatedSeries, CurveError> {
    CurveEngine::new(g)?.reconstruct_delta(n, d, floor, path)
}

/// Poincaré polynomial of the moduli space of stable bundles of coprime rank
/// and degree with fixed determinant: `(z²-1)·iss_gamma/(z+1)^{2g}`.
///
/// The residue is computed `guard` exponents below the constant term; all of
/// those coefficients must vanish. The result is checked to have nonnegative
/// integer coefficients and to satisfy `P(z) = z^D P(1/z)` with
/// `D = 2(g-1)(n²-1)`.
pub fn coprime_poincare(n: i64, d: i64, g: i64, guard: usize) -> Result<Poly, CurveError> {
    check_rank_genus(n, g)?;
    if !coprime(n, d) {
        return Err(CurveError::NotCoprime { n, d });
    }
    let floor = -(guard as i64) - 2;
    let gamma = iss_gamma(n, d, g, floor)?;
    let times = &gamma * &TruncatedSeries::from_z_poly(&Poly::x_pow_minus_one(2));
    let jac = Poly::from_ints(&[1, 1]).pow(2 * g as usize);
    let p = times.div_poly(&jac, -(guard as i64));
    if p.floor().is_some_and(|f| f > -(guard as i64)) {
        return Err(CurveError::Precision(format!("residue known only to z^{}", p.floor().unwrap_or(0))));
    }
    if let Some((k, c)) = p.terms().iter().find(|(k, _)| **k < 0) {
        return Err(CurveError::GuardBand(format!("coefficient {c} at z^{k}")));
    }
    let top = p.top_degree().unwrap_or(0);
    let coeffs: Vec<Q> = (0..=top).map(|k| p.coeff(k)).collect();
    if let Some(c) = coeffs.iter().find(|c| !c.is_integer() || c.is_negative()) {
        return Err(CurveError::GuardBand(format!("coefficient {c} is not a nonnegative integer")));
    }
    let poly = Poly::from_coeffs(coeffs);
    if !poly.is_zero() {
        let dim = 2 * (g - 1) * (n * n - 1);
        let ok = top == dim && (0..=dim).all(|k| poly.coeff(k as usize) == poly.coeff((dim - k) as usize));
        if !ok {
            return Err(CurveError::GuardBand(format!("not palindromic of degree {dim}: {}", poly.render("z"))));
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_ring::qi;

    #[test]
    fn tuple_bound_is_complete() {
        // Brute force over a wide box of degrees agrees with the bounded enumeration.
        for g in 0..=2 {
            for ranks in [vec![1, 1], vec![1, 2], vec![2, 1], vec![1, 1, 1]] {
                for d in -2..=2 {
                    for rule in [TupleRule::DecreasingSlopes, TupleRule::PrefixAboveTotal] {
                        let floor = -14;
                        let fast = degree_tuples(&ranks, d, g, floor, rule);
                        let mut slow = Vec::new();
                        let k = ranks.len();
                        let range = -40..=40;
                        let mut degs = vec![0i64; k];
                        let free = k - 1;
                        let width = 81i64;
                        for code in 0..width.pow(free as u32) {
                            let mut c = code;
                            for x in degs.iter_mut().take(free) {
                                *x = range.start() + c % width;
                                c /= width;
                            }
                            degs[k - 1] = d - degs[..free].iter().sum::<i64>();
                            let n: i64 = ranks.iter().sum();
                            let ok_rule = match rule {
                                TupleRule::DecreasingSlopes => (0..k - 1).all(|i| degs[i] * ranks[i + 1] > degs[i + 1] * ranks[i]),
                                TupleRule::PrefixAboveTotal => (1..k).all(|i| degs[..i].iter().sum::<i64>() * n > d * ranks[..i].iter().sum::<i64>()),
                            };
                            let reach = 2 * twist(&ranks, &degs, g) + ranks.iter().map(|&r| top_bound(r, g)).sum::<i64>() >= floor;
                            if ok_rule && reach {
                                slow.push(degs.clone());
                            }
                        }
                        let mut fast_sorted = fast.clone();
                        fast_sorted.sort();
                        slow.sort();
                        assert_eq!(fast_sorted, slow, "ranks {ranks:?} d={d} g={g} {rule:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn rank_one_gamma_is_delta() {
        for g in 0..=2 {
            assert_eq!(iss_gamma(1, 3, g, -10).unwrap(), iss_delta(1, 3, g, -10).unwrap());
        }
    }

    #[test]
    fn two_paths_rank_two() {
        let e = CurveEngine::new(2).unwrap();
        let a = e.iss_gamma(2, 1, -16).unwrap();
        let b = e.iss_gamma_direct(2, 1, -16).unwrap();
        assert!(a.agrees_to(&b, -16), "{}\n{}", a.render(), b.render());
        assert_eq!(a.top_degree(), Some(8));
    }

    #[test]
    fn reconstruction_rank_two() {
        let e = CurveEngine::new(1).unwrap();
        for d in 0..=1 {
            let r = e.reconstruct_delta(2, d, -14, GammaPath::Direct).unwrap();
            assert!(r.agrees_to(&iss_delta(2, d, 1, -14).unwrap(), -14));
        }
    }

    #[test]
    fn poincare_line_bundles() {
        for g in 0..=3 {
            assert_eq!(coprime_poincare(1, 0, g, 8).unwrap(), Poly::one());
        }
    }

    /// Rank two, odd degree: `((1+z³)^{2g} - z^{2g}(1+z)^{2g}) / ((1-z²)(1-z⁴))`.
    fn rank_two_closed_form(g: usize) -> Poly {
        let a = Poly::from_ints(&[1, 0, 0, 1]).pow(2 * g);
        let b = Poly::from_ints(&[1, 1]).pow(2 * g).shift_up(2 * g);
        let den = &Poly::x_pow_minus_one(2) * &Poly::x_pow_minus_one(4);
        (&a - &b).div_exact(&den).unwrap()
    }

    #[test]
    fn poincare_rank_two() {
        for g in 1..=4 {
            assert_eq!(coprime_poincare(2, 1, g as i64, 8).unwrap(), rank_two_closed_form(g), "g={g}");
        }
        assert_eq!(coprime_poincare(2, 1, 2, 8).unwrap(), Poly::from_ints(&[1, 0, 1, 4, 1, 0, 1]));
        assert_eq!(coprime_poincare(2, -3, 2, 8).unwrap(), Poly::from_ints(&[1, 0, 1, 4, 1, 0, 1]));
        assert!(coprime_poincare(2, 1, 0, 8).unwrap().is_zero());
    }

    #[test]
    fn poincare_rank_three_genus_two() {
        let p = coprime_poincare(3, 1, 2, 8).unwrap();
        assert_eq!(p, Poly::from_ints(&[1, 0, 1, 4, 3, 8, 9, 12, 20, 12, 9, 8, 3, 4, 1, 0, 1]));
        assert_eq!(coprime_poincare(3, 2, 2, 8).unwrap(), p);
        // Odd and even Betti numbers cancel.
        assert_eq!(p.eval(&qi(-1)), qi(0));
    }

    #[test]
    fn poincare_requires_coprime() {
        assert_eq!(coprime_poincare(2, 2, 2, 8), Err(CurveError::NotCoprime { n: 2, d: 2 }));
    }
}
