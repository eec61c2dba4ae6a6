use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use pexider::cli::{read_artifact, Artifact, CONFIG_SCHEMA};
use pexider::families::PartiallyAffineParams;
use pexider::{Expr, Fn1D};
use serde_json::json;

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pexider-kit")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut args = vec!["build", "--out", s(&out)];
    args.extend_from_slice(extra);
    let o = kit(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn build_families_pass_their_bounds() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), "ex.json", &["--family", "paper-example"]);
    build(dir.path(), "aff.json", &["--family", "affine", "--seed", "5"]);
    build(dir.path(), "part.json", &["--family", "partial"]);
    for case in ["linear", "trig", "hyperbolic", "constant", "linear-zero"] {
        build(dir.path(), &format!("{case}.json"), &["--family", "profiles", "--case", case]);
    }
    let a = read_artifact(&path(dir.path(), "ex.json")).unwrap();
    assert!(a.residual.max_abs < 1e-12);
    assert_eq!(a.provenance.command, "build");
}

#[test]
fn build_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        build(dir.path(), name, &["--family", "affine", "--seed", "42"]);
    }
    let a = std::fs::read(path(dir.path(), "a.json")).unwrap();
    let b = std::fs::read(path(dir.path(), "b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn violated_constraint_exits_2_and_names_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = serde_json::to_value(PartiallyAffineParams::example()).unwrap();
    p["b"] = json!(2.0);
    let cfg = path(dir.path(), "bad.json");
    std::fs::write(&cfg, json!({"schema": CONFIG_SCHEMA, "family": "partial", "partial": p}).to_string()).unwrap();
    let o = kit(&["build", "--config", s(&cfg), "--out", s(&path(dir.path(), "x.json"))]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("C⁻ + A/2 = B·D⁻"));
}

#[test]
fn perturbed_artifact_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let good = build(dir.path(), "ex.json", &["--family", "paper-example"]);
    for n in ["10", "500"] {
        assert_eq!(code(&kit(&["verify", "--artifact", s(&good), "--n", n])), 0);
    }
    let mut a: Artifact = read_artifact(&good).unwrap();
    let g = a.tuple.big_g().clone();
    let shifted = Fn1D::closed_form(g.domain(), Expr::apply(&g, Expr::x()) + 0.01).unwrap();
    a.tuple = a.tuple.with_big_g(Arc::new(shifted)).unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, serde_json::to_string(&a).unwrap()).unwrap();
    let o = kit(&["verify", "--artifact", s(&bad)]);
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((report["residual"]["max_abs"].as_f64().unwrap() - 0.01).abs() < 1e-9);
}

#[test]
fn classify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (build(dir.path(), "aff.json", &["--family", "affine", "--seed", "1"]), 0),
        (build(dir.path(), "ex.json", &["--family", "paper-example"]), 10),
        (build(dir.path(), "lin.json", &["--family", "profiles", "--case", "linear"]), 20),
    ];
    for (p, want) in cases {
        assert_eq!(code(&kit(&["classify", "--artifact", s(&p)])), want, "{}", p.display());
    }
    let o = kit(&["classify", "--artifact", s(&path(dir.path(), "ex.json"))]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let w = &r["intervals"][0];
    assert!((w["interval"][0].as_f64().unwrap() - 1.0).abs() < 0.02);
    assert_eq!(w["interval"][1].as_f64().unwrap(), 4.0);
    assert!((w["slope"].as_f64().unwrap() - 4.0).abs() < 1e-6);
}

#[test]
fn export_rows() {
    let dir = tempfile::tempdir().unwrap();
    let ex = build(dir.path(), "ex.json", &["--family", "paper-example"]);
    let o = kit(&["export", "--artifact", s(&ex), "--n", "9"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,F,f1,f2,g1,g2,u,G");
    assert_eq!(lines.len(), 10);
    assert!(lines[5].starts_with("2,8,2,2,2,2,"), "{}", lines[5]);

    let o = kit(&["export", "--artifact", s(&ex), "--n", "2"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let xs: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(xs, [0.001, 3.999]);

    let cfg = path(dir.path(), "cfg.json");
    std::fs::write(&cfg, json!({"schema": CONFIG_SCHEMA, "grid": {"n": 41, "margin": 0.0}}).to_string()).unwrap();
    let o = kit(&["export", "--config", s(&cfg), "--artifact", s(&ex)]);
    let text = String::from_utf8(o.stdout).unwrap();
    let row = text.lines().find(|l| l.split(',').nth(6) == Some("4.25")).expect("u = 4.25 row");
    assert_eq!(row.split(',').nth(7), Some("12.75"));
}

#[test]
fn exported_samples_verify_against_the_tabulated_bound() {
    let dir = tempfile::tempdir().unwrap();
    let lin = build(dir.path(), "lin.json", &["--family", "profiles", "--case", "linear"]);
    let csv = path(dir.path(), "lin.csv");
    assert_eq!(code(&kit(&["export", "--artifact", s(&lin), "--n", "201", "--out", s(&csv)])), 0);
    let o = kit(&["verify", "--artifact", s(&csv)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn input_and_output_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.json");
    std::fs::write(&cfg, json!({"schema": CONFIG_SCHEMA, "bogus": 1}).to_string()).unwrap();
    assert_eq!(code(&kit(&["build", "--config", s(&cfg), "--family", "affine"])), 4);
    std::fs::write(&cfg, json!({"schema": "other/1"}).to_string()).unwrap();
    assert_eq!(code(&kit(&["build", "--config", s(&cfg), "--family", "affine"])), 4);
    assert_eq!(code(&kit(&["verify", "--artifact", s(&path(dir.path(), "missing.json"))])), 4);
    let out = path(dir.path(), "no/such/dir/out.json");
    assert_eq!(code(&kit(&["build", "--family", "paper-example", "--out", s(&out)])), 5);
}

#[test]
fn selftest_and_geometry_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = kit(&["selftest", "--out", s(&path(dir.path(), "self.json"))]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = kit(&["geometry", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["instances"], 100);
    assert_eq!(r["pass"], true);
}
