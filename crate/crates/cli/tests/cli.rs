use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wallcross")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Vec<Value> {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice::<Value>(&out.stdout).unwrap().as_array().unwrap().clone()
}

const SLOPE_10: &str = "slope c=1,0 r=1,1";
const SLOPE_01: &str = "slope c=0,1 r=1,1";

#[test]
fn coefficients() {
    let s = json(&["coeffs", "s", "--parts", "[1,0];[0,1]", "--from", "trivial", "--to", SLOPE_10]);
    assert_eq!(s[0]["value"], "-1");
    let u = json(&["coeffs", "u", "--parts", "[1,0];[0,1]", "--from", SLOPE_10, "--to", SLOPE_01]);
    assert_eq!(u[0]["value"], "1");
    let v = json(&["coeffs", "v", "--parts", "[1,0];[0,1]", "--from", SLOPE_10, "--to", SLOPE_01, "--tree", "1>2"]);
    assert_eq!(v[0]["value"], "1/4");
    let t = json(&["coeffs", "t", "--parts", "[1,0];[0,1]", "--from", "trivial", "--to", "trivial", "--phi", "1,2"]);
    assert_eq!(t[0]["value"], "1");
}

#[test]
fn kronecker_with_oracle() {
    let rows = json(&["quiver", "--quiver", "kronecker", "--class", "1,1", "--stability", SLOPE_10, "--eval-at", "2", "--eval-at", "3", "--oracle"]);
    let r = &rows[0];
    assert_eq!(r["iss"], "(ℓ+1)/(ℓ-1)");
    assert_eq!(r["iss@2"], "3");
    assert_eq!(r["oracle@2"], "3");
    assert_eq!(r["verdict@3"], "MATCH");
    let rows = json(&["quiver", "--quiver", "kronecker", "--class", "(1,1)", "--stability", SLOPE_01, "--eval-at", "4", "--oracle"]);
    assert_eq!(rows[0]["iss"], "0");
    assert_eq!(rows[0]["oracle@4"], "0");
}

#[test]
fn one_vertex_rows_are_sorted() {
    let rows = json(&["quiver", "--quiver", "one-vertex", "--class", "2", "--class", "1", "--class", "2", "--eval-at", "2"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["class"], "(1)");
    assert_eq!(rows[1]["j"], "-1/(2ℓ(ℓ+1))");
    assert_eq!(rows[1]["omega"], "-1/4");
    assert_eq!(rows[1]["iss@2"], "1/6");
}

#[test]
fn curve_outputs() {
    let p = json(&["curve", "--genus", "2", "--rank", "2", "--degree", "1", "--poincare"]);
    assert_eq!(p[0]["poincare"], "z^6+z^4+4z^3+z^2+1");
    let s = json(&["curve", "--genus", "2", "--rank", "1", "--degree", "-3", "--floor", "-2"]);
    assert_eq!(s[0]["series"], "z^2 + 4z + 7 + 8z^-1 + 8z^-2 + O(z^-3)");
    assert_eq!(s[0]["value"]["floor"], -2);
    let purity = json(&["curve", "--genus", "1", "--rank", "1", "--degree", "0", "--stability", "purity", "--floor", "-2"]);
    assert_eq!(purity[0]["stability"], "purity");
    assert_eq!(purity[0]["series"], "1 + 2z^-1 + 2z^-2 + O(z^-3)");
}

#[test]
fn csv_output() {
    let out = run(&["--format", "csv", "coeffs", "s", "--parts", "[1,0];[0,1]", "--from", "trivial", "--to", SLOPE_10]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("coefficient,parts,from,to,structure,value"));
    assert_eq!(lines.next(), Some("S,\"[1,0];[0,1]\",trivial,\"slope c=1,0 r=1,1\",,-1"));
}

#[test]
fn check_is_deterministic() {
    let args = ["check", "--suite", "coeffs", "--seed", "11", "--cases", "20", "--max-n", "4"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let rows: Vec<Value> = serde_json::from_slice(&a.stdout).unwrap();
    assert!(rows.iter().all(|r| r["status"] == "PASS" && r["seed"] == 11));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["curve", "--genus", "2", "--rank", "2", "--degree", "0", "--poincare"]).status.code(), Some(1));
    assert_eq!(run(&["curve", "--genus", "-1", "--rank", "1", "--degree", "0"]).status.code(), Some(1));
    assert_eq!(run(&["quiver", "--quiver", "kronecker", "--class", "1,1,1"]).status.code(), Some(1));
    assert_eq!(run(&["coeffs", "s", "--parts", "[1,0]", "--from", "bogus", "--to", "trivial"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--suite", "nothing"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["quiver", "--quiver", "kronecker", "--class", "1,1", "--eval-at", "1/2", "--oracle"]).status.code(), Some(1));
}

#[test]
fn jobs_do_not_change_results() {
    let base = run(&["check", "--suite", "curve", "--cases", "5"]);
    let one = run(&["--jobs", "1", "check", "--suite", "curve", "--cases", "5"]);
    assert!(base.status.success());
    assert_eq!(base.stdout, one.stdout);
}
