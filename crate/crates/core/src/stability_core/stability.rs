use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::kclass::{Cone, KClass};
use super::StabilityError;
use crate::lambda_ring::Q;

/// A value of a weak stability condition.
///
/// Values from one stability condition always share a variant. Reduced Hilbert
/// values compare by support dimension first, lower dimension being *greater*,
/// then by slope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TauValue {
    Trivial,
    Slope(Q),
    ReducedHilbert { dim: u8, slope: Q },
}

impl TauValue {
    fn rank(&self) -> u8 {
        match self {
            TauValue::Trivial => 0,
            TauValue::Slope(_) => 1,
            TauValue::ReducedHilbert { .. } => 2,
        }
    }
}

impl Ord for TauValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TauValue::Trivial, TauValue::Trivial) => Ordering::Equal,
            (TauValue::Slope(a), TauValue::Slope(b)) => a.cmp(b),
            (TauValue::ReducedHilbert { dim: da, slope: sa }, TauValue::ReducedHilbert { dim: db, slope: sb }) => {
                db.cmp(da).then_with(|| sa.cmp(sb))
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for TauValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TauValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauValue::Trivial => f.write_str("0"),
            TauValue::Slope(s) => write!(f, "{s}"),
            TauValue::ReducedHilbert { dim: 0, .. } => f.write_str("1"),
            TauValue::ReducedHilbert { slope, .. } => write!(f, "t{}{}", if *slope < Q::zero() { "" } else { "+" }, slope),
        }
    }
}

/// Weak stability condition on a lattice with a positive cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeakStability {
    /// Every class gets the same value.
    Trivial,
    /// `c(α) / r(α)` with `r > 0` on the positive cone.
    Slope { c: Vec<i64>, r: Vec<i64> },
    /// Reduced Hilbert polynomial `t + d/n + 1 - g` on a genus `g` curve; torsion
    /// classes sit above every positive-rank class.
    CurveGieseker { genus: i64 },
    /// Only the support dimension: torsion above everything else.
    CurvePurity { genus: i64 },
}

impl WeakStability {
    pub fn slope(c: Vec<i64>, r: Vec<i64>) -> Self {
        WeakStability::Slope { c, r }
    }

    /// Cone on which this condition is defined (trivial works on any cone).
    pub fn cone(&self) -> Option<Cone> {
        match self {
            WeakStability::Trivial => None,
            WeakStability::Slope { .. } => Some(Cone::Nonnegative),
            WeakStability::CurveGieseker { .. } | WeakStability::CurvePurity { .. } => Some(Cone::Curve),
        }
    }

    pub fn tau_of(&self, a: &KClass) -> Result<TauValue, StabilityError> {
        if let Some(cone) = self.cone() {
            if !cone.contains(a) {
                return Err(StabilityError::NotInCone(a.clone()));
            }
        } else if a.is_zero() {
            return Err(StabilityError::NotInCone(a.clone()));
        }
        match self {
            WeakStability::Trivial => Ok(TauValue::Trivial),
            WeakStability::Slope { c, r } => {
                if c.len() != a.dim() || r.len() != a.dim() {
                    return Err(StabilityError::DimensionMismatch { expected: c.len(), got: a.dim() });
                }
                let rv = a.dot(r);
                if rv <= 0 {
                    return Err(StabilityError::NonPositiveRank(a.clone()));
                }
                Ok(TauValue::Slope(Q::new(a.dot(c).into(), rv.into())))
            }
            WeakStability::CurveGieseker { genus } => {
                let (n, d) = (a.0[0], a.0[1]);
                if n == 0 {
                    Ok(TauValue::ReducedHilbert { dim: 0, slope: Q::zero() })
                } else {
                    Ok(TauValue::ReducedHilbert { dim: 1, slope: Q::new(d.into(), n.into()) + Q::from_integer((1 - genus).into()) })
                }
            }
            WeakStability::CurvePurity { .. } => {
                let dim = if a.0[0] == 0 { 0 } else { 1 };
                Ok(TauValue::ReducedHilbert { dim, slope: Q::zero() })
            }
        }
    }

    /// Weak seesaw for `β = α + γ`: `τ(β)` lies between `τ(α)` and `τ(γ)`.
    pub fn check_weak_seesaw(&self, a: &KClass, g: &KClass) -> Result<bool, StabilityError> {
        let b = a + g;
        let (ta, tb, tg) = (self.tau_of(a)?, self.tau_of(&b)?, self.tau_of(g)?);
        Ok((ta <= tb && tb <= tg) || (ta >= tb && tb >= tg))
    }

    /// Does `self` dominate `other` on the given classes, i.e. does
    /// `other(α) <= other(β)` imply `self(α) <= self(β)`?
    pub fn dominates_on(&self, other: &WeakStability, classes: &[KClass]) -> Result<bool, StabilityError> {
        for a in classes {
            for b in classes {
                if other.tau_of(a)? <= other.tau_of(b)? && self.tau_of(a)? > self.tau_of(b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for WeakStability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            WeakStability::Trivial => f.write_str("trivial"),
            WeakStability::Slope { c, r } => write!(f, "slope c={} r={}", join(c), join(r)),
            WeakStability::CurveGieseker { genus } => write!(f, "gieseker genus={genus}"),
            WeakStability::CurvePurity { genus } => write!(f, "purity genus={genus}"),
        }
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, StabilityError> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| StabilityError::Parse(format!("bad integer {t:?}"))))
        .collect()
}

impl FromStr for WeakStability {
    type Err = StabilityError;

    /// Accepts the JSON form, or `trivial`, `slope c=1,0 r=1,1`,
    /// `gieseker genus=2`, `purity genus=2`.
    fn from_str(s: &str) -> Result<Self, StabilityError> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| StabilityError::Parse(e.to_string()));
        }
        let mut words = s.split_whitespace();
        let head = words.next().ok_or_else(|| StabilityError::Parse("empty stability".into()))?;
        let mut kv = std::collections::BTreeMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| StabilityError::Parse(format!("expected key=value, got {w:?}")))?;
            kv.insert(k.to_string(), v.to_string());
        }
        let genus = |kv: &std::collections::BTreeMap<String, String>| -> Result<i64, StabilityError> {
            let g = kv.get("genus").or_else(|| kv.get("g")).ok_or_else(|| StabilityError::Parse("missing genus=".into()))?;
            g.parse().map_err(|_| StabilityError::Parse(format!("bad genus {g:?}")))
        };
        match head {
            "trivial" => Ok(WeakStability::Trivial),
            "slope" => {
                let c = kv.get("c").ok_or_else(|| StabilityError::Parse("missing c=".into()))?;
                let r = kv.get("r").ok_or_else(|| StabilityError::Parse("missing r=".into()))?;
                let (c, r) = (parse_ints(c)?, parse_ints(r)?);
                if c.len() != r.len() {
                    return Err(StabilityError::Parse("c and r have different lengths".into()));
                }
                Ok(WeakStability::Slope { c, r })
            }
            "gieseker" | "curve_gieseker" => Ok(WeakStability::CurveGieseker { genus: genus(&kv)? }),
            "purity" | "curve_purity" => Ok(WeakStability::CurvePurity { genus: genus(&kv)? }),
            other => Err(StabilityError::Parse(format!("unknown stability kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_ring::{qi, qr};

    #[test]
    fn slope_value() {
        let s: WeakStability = "slope c=1,0 r=1,1".parse().unwrap();
        assert_eq!(s.tau_of(&KClass::from([1, 1])).unwrap(), TauValue::Slope(qr(1, 2)));
        assert!(matches!(s.tau_of(&KClass::from([0, 0])), Err(StabilityError::NotInCone(_))));
    }

    #[test]
    fn curve_values() {
        let g = WeakStability::CurveGieseker { genus: 2 };
        assert_eq!(g.tau_of(&KClass::from([1, 0])).unwrap(), TauValue::ReducedHilbert { dim: 1, slope: qi(-1) });
        let p = WeakStability::CurvePurity { genus: 2 };
        let torsion = p.tau_of(&KClass::from([0, 3])).unwrap();
        assert_eq!(torsion, TauValue::ReducedHilbert { dim: 0, slope: qi(0) });
        assert!(torsion > p.tau_of(&KClass::from([5, -100])).unwrap());
        assert!(g.tau_of(&KClass::from([0, 1])).unwrap() > g.tau_of(&KClass::from([1, 1000])).unwrap());
    }

    #[test]
    fn seesaw_examples() {
        let p = WeakStability::CurvePurity { genus: 2 };
        assert!(p.check_weak_seesaw(&KClass::from([1, 0]), &KClass::from([0, 1])).unwrap());
        assert!(WeakStability::Trivial.check_weak_seesaw(&KClass::from([1]), &KClass::from([2])).unwrap());
    }

    #[test]
    fn parse_and_json() {
        let s: WeakStability = "slope c=1,0 r=1,1".parse().unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"slope","c":[1,0],"r":[1,1]}"#);
        let g: WeakStability = r#"{"kind":"curve_gieseker","genus":2}"#.parse().unwrap();
        assert_eq!(g, WeakStability::CurveGieseker { genus: 2 });
        assert_eq!(serde_json::to_string(&WeakStability::Trivial).unwrap(), r#"{"kind":"trivial"}"#);
        assert!("slope c=1 r=1,1".parse::<WeakStability>().is_err());
        assert_eq!(s.to_string().parse::<WeakStability>().unwrap(), s);
    }

    #[test]
    fn trivial_dominates_slope() {
        let s = WeakStability::slope(vec![1, 0], vec![1, 1]);
        let classes: Vec<KClass> = (0..3).flat_map(|a| (0..3).map(move |b| KClass::from([a, b]))).filter(|k| !k.is_zero()).collect();
        assert!(WeakStability::Trivial.dominates_on(&s, &classes).unwrap());
        assert!(!s.dominates_on(&WeakStability::Trivial, &classes).unwrap());
    }
}
