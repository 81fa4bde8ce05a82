use num_traits::ToPrimitive;
use serde_json::{json, Value};

use wallcross_core::checks::{run_suite, CheckConfig, Suite};
use wallcross_core::coefficients::{s_coeff, t_coeff, u_coeff, v_coeff, Digraph};
use wallcross_core::curve_model::{coprime_poincare, iss_delta, iss_gamma, CurveError};
use wallcross_core::invariant_engine::{j_from_iss, ConeEnumerator};
use wallcross_core::lambda_ring::{TruncatedSeries, Q};
use wallcross_core::quiver_model::{euler_form, ff_count_semistable, iss_semistable, semistable_table, OracleGuard, QuiverError};
use wallcross_core::stability_core::{KClass, Poset};

use crate::output::Report;
use crate::{parse, CheckArgs, Coefficient, CoeffsArgs, CurveArgs, CurveStability, Failure, QuiverArgs};

/// A report to print, plus a failure to signal after printing it.
pub type Outcome = Result<(Option<Report>, Option<Failure>), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn text<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

pub fn coeffs(a: &CoeffsArgs) -> Outcome {
    let d = parse::datum(&a.parts)?;
    let from = parse::stability(&a.from, "--from")?;
    let to = parse::stability(&a.to, "--to")?;
    let mut report = Report::new(&["coefficient", "parts", "from", "to", "structure", "value"]);
    let (structure, value) = match a.which {
        Coefficient::S => (String::new(), s_coeff(&d, &from, &to).map_err(input)?.to_string()),
        Coefficient::U => (String::new(), u_coeff(&d, &from, &to).map_err(input)?.to_string()),
        Coefficient::T => {
            let n = d.len();
            let poset = match &a.order {
                Some(o) => parse::order(o, n)?,
                None => Poset::chain(n),
            };
            let phi = match &a.phi {
                Some(p) => parse::labels(p, "--phi")?,
                None => (0..n).collect(),
            };
            let k = phi.iter().max().map_or(0, |m| m + 1);
            let v = t_coeff(&poset, d.parts(), k, &phi, &from, &to).map_err(input)?;
            let order = a.order.clone().unwrap_or_else(|| "chain".into());
            let phi_s: Vec<String> = phi.iter().map(|x| (x + 1).to_string()).collect();
            (format!("order={order} phi={}", phi_s.join(",")), v.to_string())
        }
        Coefficient::V => {
            let tree = a.tree.as_deref().ok_or_else(|| Failure::Input("coeffs v needs --tree".into()))?;
            let g: Digraph = tree.parse().map_err(input)?;
            let v = v_coeff(&g, d.parts(), &from, &to).map_err(input)?;
            (format!("tree={g}"), v.to_string())
        }
    };
    let name = format!("{:?}", a.which);
    report.push(vec![text(name), text(&d), text(&from), text(&to), text(structure), text(value)]);
    Ok((Some(report), None))
}

fn quiver_input(e: QuiverError) -> Failure {
    Failure::Input(e.to_string())
}

pub fn quiver(a: &QuiverArgs) -> Outcome {
    let q = parse::quiver(&a.quiver)?;
    let mu = parse::stability(&a.stability, "--stability")?;
    q.check_stability(&mu).map_err(quiver_input)?;
    let mut classes: Vec<KClass> = a.classes.iter().map(|c| parse::class(c)).collect::<Result<_, _>>()?;
    classes.sort();
    classes.dedup();
    for c in &classes {
        q.check_dim(c).map_err(quiver_input)?;
    }
    let points: Vec<(String, Q)> = a.eval_at.iter().map(|s| Ok((s.trim().to_string(), parse::rational(s)?))).collect::<Result<_, Failure>>()?;
    let oracle_q: Vec<usize> = if a.oracle {
        if points.is_empty() {
            return Err(Failure::Input("--oracle needs at least one --eval-at point".into()));
        }
        points
            .iter()
            .map(|(s, p)| p.to_integer().to_usize().filter(|_| p.is_integer()).ok_or_else(|| Failure::Input(format!("oracle needs an integer field size, got {s}"))))
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };

    let mut cols: Vec<String> = ["quiver", "class", "stability", "iss", "j", "omega"].iter().map(|s| s.to_string()).collect();
    for (s, _) in &points {
        cols.push(format!("iss@{s}"));
        if a.oracle {
            cols.push(format!("oracle@{s}"));
            cols.push(format!("verdict@{s}"));
        }
    }
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut report = Report::new(&col_refs);
    let chi = euler_form(&q);
    let guard = OracleGuard::default();
    let mut mismatches = Vec::new();
    for c in &classes {
        let iss = iss_semistable(&q, c, &mu).map_err(quiver_input)?;
        let table = semistable_table(&q, c, &mu).map_err(quiver_input)?;
        let j = j_from_iss(c, &mu, &table, &chi, &ConeEnumerator).map_err(input)?;
        let omega = if j.in_lambda0() { text(j.project_omega().map_err(input)?) } else { Value::Null };
        let mut row = vec![text(&a.quiver), text(c), text(&mu), text(&iss), text(&j), omega];
        for (i, (s, p)) in points.iter().enumerate() {
            let v = iss.eval_at(p).map_err(|e| Failure::Input(format!("evaluating at {s}: {e}")))?;
            row.push(text(&v));
            if a.oracle {
                let count = ff_count_semistable(&q, c, &mu, oracle_q[i], &guard).map_err(quiver_input)?;
                let ok = count == v;
                if !ok {
                    mismatches.push(format!("class {c} at q={s}: {v} vs count {count}"));
                }
                row.push(text(&count));
                row.push(text(if ok { "MATCH" } else { "MISMATCH" }));
            }
        }
        report.push(row);
    }
    let failure = (!mismatches.is_empty()).then(|| Failure::Mismatch(mismatches.join("; ")));
    Ok((Some(report), failure))
}

fn curve_failure(e: CurveError) -> Failure {
    match e {
        CurveError::GuardBand(_) | CurveError::Precision(_) => Failure::Mismatch(e.to_string()),
        _ => Failure::Input(e.to_string()),
    }
}

pub fn curve(a: &CurveArgs) -> Outcome {
    let stability = match a.stability {
        CurveStability::Gieseker => "gieseker",
        CurveStability::Purity => "purity",
    };
    if a.poincare {
        if a.stability != CurveStability::Gieseker {
            return Err(Failure::Input("--poincare applies to gieseker stability".into()));
        }
        let p = coprime_poincare(a.rank, a.degree, a.genus, a.guard).map_err(curve_failure)?;
        let mut report = Report::new(&["genus", "rank", "degree", "guard", "poincare", "value"]);
        let series = TruncatedSeries::from_z_poly(&p);
        let value = serde_json::to_value(&series).map_err(input)?;
        report.push(vec![json!(a.genus), json!(a.rank), json!(a.degree), json!(a.guard), text(p.render("z")), value]);
        return Ok((Some(report), None));
    }
    let s = match a.stability {
        CurveStability::Gieseker => iss_gamma(a.rank, a.degree, a.genus, a.floor),
        CurveStability::Purity => iss_delta(a.rank, a.degree, a.genus, a.floor),
    }
    .map_err(curve_failure)?;
    let mut report = Report::new(&["genus", "rank", "degree", "stability", "floor", "series", "value"]);
    let value = serde_json::to_value(&s).map_err(input)?;
    report.push(vec![json!(a.genus), json!(a.rank), json!(a.degree), text(stability), json!(a.floor), text(s.render()), value]);
    Ok((Some(report), None))
}

pub fn check(a: &CheckArgs) -> Outcome {
    let suite: Suite = a.suite.parse().map_err(Failure::Input)?;
    if a.max_n == 0 || a.cases == 0 {
        return Err(Failure::Input("--max-n and --cases must be positive".into()));
    }
    let cfg = CheckConfig { seed: a.seed, max_n: a.max_n, cases: a.cases };
    let results = run_suite(suite, &cfg);
    let mut report = Report::new(&["suite", "check", "seed", "cases", "failures", "status", "example"]);
    for r in &results {
        report.push(vec![
            text(r.suite),
            text(r.name),
            json!(a.seed),
            json!(r.cases),
            json!(r.failures),
            text(if r.passed() { "PASS" } else { "FAIL" }),
            r.examples.first().map_or(Value::Null, text),
        ]);
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    eprintln!("{suite}: {} passed, {failed} failed", results.len() - failed);
    let failure = (failed > 0).then(|| Failure::Mismatch(format!("{failed} checks failed")));
    Ok((Some(report), failure))
}
