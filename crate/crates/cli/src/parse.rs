use std::fs;

use wallcross_core::lambda_ring::Q;
use wallcross_core::quiver_model::QuiverPresentation;
use wallcross_core::stability_core::{ADatum, KClass, Poset, WeakStability};

use crate::Failure;

fn input<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{what}: {e}"))
}

pub fn datum(s: &str) -> Result<ADatum, Failure> {
    s.parse().map_err(input("--parts"))
}

pub fn stability(s: &str, flag: &str) -> Result<WeakStability, Failure> {
    s.parse().map_err(input(flag))
}

/// "1,1" or "(1,1)".
pub fn class(s: &str) -> Result<KClass, Failure> {
    let body = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let coords: Result<Vec<i64>, _> = body.split(',').map(|t| t.trim().parse::<i64>()).collect();
    coords.map(KClass).map_err(input(&format!("class {s:?}")))
}

pub fn rational(s: &str) -> Result<Q, Failure> {
    s.trim().parse::<Q>().map_err(input(&format!("number {s:?}")))
}

/// One-based list of labels "1,1,2", returned zero-based.
pub fn labels(s: &str, flag: &str) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for t in s.split(',') {
        let v: usize = t.trim().parse().map_err(input(flag))?;
        if v == 0 {
            return Err(Failure::Input(format!("{flag}: labels start at 1")));
        }
        out.push(v - 1);
    }
    Ok(out)
}

/// One-based relations "1<2,1<3" on `n` points.
pub fn order(s: &str, n: usize) -> Result<Poset, Failure> {
    let mut pairs = Vec::new();
    for r in s.split(',').map(str::trim).filter(|r| !r.is_empty()) {
        let (a, b) = r.split_once('<').ok_or_else(|| Failure::Input(format!("--order: expected i<j, got {r:?}")))?;
        let a: usize = a.trim().parse().map_err(input("--order"))?;
        let b: usize = b.trim().parse().map_err(input("--order"))?;
        if a == 0 || b == 0 {
            return Err(Failure::Input("--order: labels start at 1".into()));
        }
        pairs.push((a - 1, b - 1));
    }
    Poset::from_relations(n, &pairs).map_err(input("--order"))
}

pub fn quiver(s: &str) -> Result<QuiverPresentation, Failure> {
    match s {
        "kronecker" => return Ok(QuiverPresentation::kronecker(2)),
        "one-vertex" => return Ok(QuiverPresentation::one_vertex()),
        _ => {}
    }
    if let Some(m) = s.strip_prefix("kronecker:") {
        let m: usize = m.parse().map_err(input("--quiver"))?;
        return Ok(QuiverPresentation::kronecker(m));
    }
    let text = fs::read_to_string(s).map_err(input(&format!("--quiver {s}")))?;
    QuiverPresentation::from_json(&text).map_err(input(&format!("--quiver {s}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_and_labels() {
        assert_eq!(class("(1, 2)").unwrap(), KClass(vec![1, 2]));
        assert!(class("1,x").is_err());
        assert_eq!(labels("1,1,2", "--phi").unwrap(), vec![0, 0, 1]);
        assert!(labels("0", "--phi").is_err());
        let p = order("1<2", 3).unwrap();
        assert!(p.leq(0, 1) && !p.leq(0, 2));
        assert_eq!(rational("5/3").unwrap(), Q::new(5.into(), 3.into()));
    }
}
