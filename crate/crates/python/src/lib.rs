//! Python bindings. Rationals come back as `fractions.Fraction`; ring
//! elements and series come back in their printed form alongside exact data.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use wallcross_core::checks::{run_suite, CheckConfig, Suite};
use wallcross_core::coefficients::{s_coeff as s_core, u_coeff as u_core, v_coeff as v_core, Digraph};
use wallcross_core::curve_model::{self, CurveError};
use wallcross_core::invariant_engine::{j_from_iss, ConeEnumerator};
use wallcross_core::lambda_ring::{TruncatedSeries, Q};
use wallcross_core::quiver_model::{euler_form, iss_semistable, semistable_table, QuiverPresentation};
use wallcross_core::stability_core::{ADatum, KClass, WeakStability};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, q: &Q) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

fn datum(parts: &str) -> PyResult<ADatum> {
    parts.parse().map_err(value_err)
}

fn stability(s: &str) -> PyResult<WeakStability> {
    s.parse().map_err(value_err)
}

/// Builtin names as in the command line tool, otherwise a JSON document.
pub fn quiver_from(text: &str) -> Result<QuiverPresentation, String> {
    match text.trim() {
        "kronecker" => Ok(QuiverPresentation::kronecker(2)),
        "one-vertex" => Ok(QuiverPresentation::one_vertex()),
        s => match s.strip_prefix("kronecker:") {
            Some(m) => m.parse().map(QuiverPresentation::kronecker).map_err(|e| format!("{s}: {e}")),
            None => QuiverPresentation::from_json(s).map_err(|e| e.to_string()),
        },
    }
}

/// S coefficient of the ordered parts, e.g. `s_coeff("[1,0];[0,1]", "trivial", "slope c=1,0 r=1,1")`.
#[pyfunction]
#[pyo3(name = "s_coeff")]
fn s_coeff(parts: &str, source: &str, target: &str) -> PyResult<i64> {
    s_core(&datum(parts)?, &stability(source)?, &stability(target)?).map_err(value_err)
}

#[pyfunction]
#[pyo3(name = "u_coeff")]
fn u_coeff<'py>(py: Python<'py>, parts: &str, source: &str, target: &str) -> PyResult<Bound<'py, PyAny>> {
    let q = u_core(&datum(parts)?, &stability(source)?, &stability(target)?).map_err(value_err)?;
    fraction(py, &q)
}

/// V coefficient for a one-based directed tree such as `"1>2"`.
#[pyfunction]
#[pyo3(name = "v_coeff")]
fn v_coeff<'py>(py: Python<'py>, tree: &str, parts: &str, source: &str, target: &str) -> PyResult<Bound<'py, PyAny>> {
    let g: Digraph = tree.parse().map_err(value_err)?;
    let q = v_core(&g, datum(parts)?.parts(), &stability(source)?, &stability(target)?).map_err(value_err)?;
    fraction(py, &q)
}

/// Invariants of one dimension vector: printed `iss` and `j`, `omega` when
/// defined, and `iss` evaluated at each point of `eval_at`.
#[pyfunction]
#[pyo3(signature = (quiver, dim, stability = "trivial", eval_at = Vec::new()))]
fn quiver_invariants<'py>(py: Python<'py>, quiver: &str, dim: Vec<i64>, stability: &str, eval_at: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
    let q = quiver_from(quiver).map_err(PyValueError::new_err)?;
    let mu = self::stability(stability)?;
    let class = KClass(dim);
    let iss = iss_semistable(&q, &class, &mu).map_err(value_err)?;
    let table = semistable_table(&q, &class, &mu).map_err(value_err)?;
    let j = j_from_iss(&class, &mu, &table, &euler_form(&q), &ConeEnumerator).map_err(value_err)?;
    let out = PyDict::new(py);
    out.set_item("iss", iss.to_string())?;
    out.set_item("j", j.to_string())?;
    if j.in_lambda0() {
        out.set_item("omega", fraction(py, &j.project_omega().map_err(value_err)?.0)?)?;
    } else {
        out.set_item("omega", py.None())?;
    }
    let values = PyDict::new(py);
    for ell in eval_at {
        let v = iss.eval_at(&Q::from_integer(ell.into())).map_err(value_err)?;
        values.set_item(ell, fraction(py, &v)?)?;
    }
    out.set_item("values", values)?;
    Ok(out)
}

fn curve_err(e: CurveError) -> PyErr {
    match e {
        CurveError::GuardBand(_) | CurveError::Precision(_) => PyRuntimeError::new_err(e.to_string()),
        _ => value_err(e),
    }
}

fn series_terms<'py>(py: Python<'py>, s: &TruncatedSeries) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (k, c) in s.terms() {
        d.set_item(*k, fraction(py, c)?)?;
    }
    Ok(d)
}

/// Stack-function series of rank `rank`, degree `degree` bundles down to
/// `z^floor`, as a dict from exponent to coefficient.
#[pyfunction]
#[pyo3(signature = (genus, rank, degree, floor = curve_model::DEFAULT_FLOOR, stability = "gieseker"))]
fn curve_series<'py>(py: Python<'py>, genus: i64, rank: i64, degree: i64, floor: i64, stability: &str) -> PyResult<Bound<'py, PyDict>> {
    let s = match stability {
        "gieseker" => curve_model::iss_gamma(rank, degree, genus, floor),
        "purity" => curve_model::iss_delta(rank, degree, genus, floor),
        other => return Err(PyValueError::new_err(format!("unknown curve stability {other:?}"))),
    }
    .map_err(curve_err)?;
    series_terms(py, &s)
}

/// Poincaré polynomial coefficients, constant term first, for coprime rank and degree.
#[pyfunction]
#[pyo3(signature = (genus, rank, degree, guard = curve_model::DEFAULT_GUARD))]
fn coprime_poincare(genus: i64, rank: i64, degree: i64, guard: usize) -> PyResult<Vec<i64>> {
    let p = curve_model::coprime_poincare(rank, degree, genus, guard).map_err(curve_err)?;
    p.coeffs()
        .iter()
        .map(|c| c.to_integer().try_into().map_err(|_| PyRuntimeError::new_err("coefficient exceeds i64")))
        .collect()
}

/// Runs a seeded identity suite; one dict per check.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = 7, max_n = 5, cases = 100))]
fn run_checks<'py>(py: Python<'py>, suite: &str, seed: u64, max_n: usize, cases: usize) -> PyResult<Bound<'py, PyList>> {
    let suite: Suite = suite.parse().map_err(PyValueError::new_err)?;
    let results = py.detach(|| run_suite(suite, &CheckConfig { seed, max_n, cases }));
    let out = PyList::empty(py);
    for r in results {
        let d = PyDict::new(py);
        d.set_item("suite", r.suite.to_string())?;
        d.set_item("check", r.name)?;
        d.set_item("cases", r.cases)?;
        d.set_item("failures", r.failures)?;
        d.set_item("passed", r.passed())?;
        d.set_item("examples", r.examples.clone())?;
        out.append(d)?;
    }
    Ok(out)
}

#[pymodule]
fn wallcross(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(s_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(u_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(v_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(quiver_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(curve_series, m)?)?;
    m.add_function(wrap_pyfunction!(coprime_poincare, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quiver_names() {
        assert_eq!(quiver_from("kronecker").unwrap().num_vertices(), 2);
        assert!(quiver_from("kronecker:x").is_err());
        assert!(quiver_from("{").is_err());
    }
}
