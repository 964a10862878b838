use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planar-spectra"))
        .args(args)
        .output()
        .unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

fn lambdas(report: &Value) -> Vec<f64> {
    report["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["lambda"].as_f64().unwrap())
        .collect()
}

#[test]
fn disk_spectrum_reports_branches() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "disk.json", r#"{"type": "disk", "radius": 1.0}"#);
    let out = run(&["spectrum", &d, "--bc", "robin", "--alpha-scaled", "-6.283185307179586"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 1);
    let eig = rows[0]["eigenvalues"].as_array().unwrap();
    assert_eq!(eig[0]["branch"], "exponential");
    assert!(eig[1]["lambda"].as_f64().unwrap().abs() < 1e-10);
    assert_eq!(eig[1]["branch"], "linear");
    assert_eq!(eig[1]["mult"], 2);
}

#[test]
fn rectangle_spectrum_is_analytic() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "rect.json", r#"{"type": "rectangle", "a": 1.0, "b": 1.0}"#);
    let out = run(&["spectrum", &d, "--bc", "neumann"]);
    assert!(out.status.success());
    let l = lambdas(&json_lines(&out)[0]);
    let pi2 = std::f64::consts::PI.powi(2);
    assert!(l[0].abs() < 1e-12);
    assert!((l[1] - pi2).abs() < 1e-10);
}

#[test]
fn polygon_spectrum_exports_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(
        dir.path(),
        "hex.json",
        r#"{"type": "regular_polygon", "n": 6, "radius": 1.0}"#,
    );
    let export = dir.path().join("export");
    let out = run(&[
        "spectrum",
        &d,
        "--bc",
        "robin",
        "--alpha-scaled",
        "1",
        "--levels",
        "3",
        "--count",
        "3",
        "--export",
        export.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = &json_lines(&out)[0];
    let l = lambdas(report);
    assert!(l[0] > 0.0 && l[0] < l[1]);
    assert!(report["eigenvalues"][0]["error"].as_f64().is_some());
    for f in [
        "mesh_nodes.csv",
        "mesh_triangles.csv",
        "eigenvectors.csv",
        "diagnostics.json",
    ] {
        assert!(export.join(f).exists(), "{f}");
    }
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"type": "disk", "radius": -1.0}"#);
    assert_eq!(run(&["spectrum", &bad, "--alpha-scaled", "1"]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["spectrum", missing.to_str().unwrap(), "--alpha-scaled", "1"])
            .status
            .code(),
        Some(2)
    );
    let cfg = write(dir.path(), "cfg.json", r#"{"unknown_key": 1}"#);
    assert_eq!(run(&["verify", "threshold", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn threshold_suite_passes_and_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "threshold", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_lines(&out);
    assert!(rows.len() >= 3);
    assert!(rows.iter().all(|r| r["tag"] == "threshold"));
    let csv = fs::read_to_string(dir.path().join("threshold_summary.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "tag,domain,alpha,lhs,rhs,margin,error_estimate,provenance,pass"
    );
}

#[test]
fn annulus_without_witness_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scan.json", r#"{"annulus_eps": [0.7, 0.8, 0.9]}"#);
    let out = run(&["verify", "annulus", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let cfg = write(dir.path(), "scan2.json", r#"{"annulus_eps": [0.1, 0.15, 0.2]}"#);
    assert_eq!(run(&["verify", "annulus", "--config", &cfg]).status.code(), Some(0));
}

#[test]
fn figures_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["figures", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let csvs = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "csv"))
        .count();
    assert_eq!(csvs, 12);
    let index: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("figures.json")).unwrap()).unwrap();
    assert_eq!(index.as_array().unwrap().len(), 12);
}
