use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gaussmap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussmap"))
        .args(args)
        .current_dir(dir)
        .env_remove("GAUSSMAP_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn catalog_listing_filter_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = gaussmap(dir.path(), &["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("horosphere (H3) H=1"));

    let o = gaussmap(dir.path(), &["catalog", "--space", "h2xr"]);
    let text = stdout(&o);
    assert!(text.lines().count() >= 4);
    assert!(text.lines().all(|l| l.contains("(H2xR)")), "{text}");

    let o = gaussmap(dir.path(), &["catalog", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<_> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"clifford-torus"));

    let o = gaussmap(dir.path(), &["catalog", "--space", "q7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn passing_check_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = gaussmap(
        dir.path(),
        &["check", "ruh-vilms", "--surface", "geodesic-sphere-s3", "--rho", "0.7", "--grid", "64", "--richardson"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("reports/ruh-vilms-geodesic-sphere-s3.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["check"], "ruh-vilms");
    assert_eq!(v["grid"], serde_json::json!([64, 64]));
    let f = &v["fields"][0];
    for key in ["name", "max_abs", "mean_abs", "argmax", "tol", "pass"] {
        assert!(f.get(key).is_some(), "missing {key}");
    }
    assert!(v["audit"]["s_fit"].is_number());
}

#[test]
fn hos_prints_the_threshold_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = gaussmap(
        dir.path(),
        &["check", "hos", "--surface", "equidistant-h3", "--d", "0.5", "--killing", "hyperbolic-translation"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("threshold verdict: fails (2H^2+Ric_N<0)"));
}

#[test]
fn quadform_on_a_fine_grid_prints_cr() {
    let dir = tempfile::tempdir().unwrap();
    let o = gaussmap(dir.path(), &["check", "quadform", "--surface", "clifford-torus", "--grid", "128"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("CR residual:"));
}

#[test]
fn failing_check_exits_one_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    // a boost that moves the horosphere off itself
    let o = gaussmap(
        dir.path(),
        &["check", "invariance", "--surface", "horosphere", "--grid", "16", "--killing", "0,0,1,0,0,0"],
    );
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("field level_set") && err.contains("at node ["), "{err}");
    assert!(dir.path().join("reports/invariance-horosphere.json").exists());
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["check", "duality", "--surface", "horosphere", "--grid", "8"],
        &["check", "hos", "--surface", "horosphere"],
        &["check", "hos", "--surface", "horosphere", "--killing", "1,2"],
        &["check", "duality", "--surface", "no-such-surface"],
        &["check", "duality", "--surface", "horosphere", "--tol", "D=-1"],
        &["check", "quadform", "--surface", "vertical-graph-h2xr"],
        &["check", "duality", "--surface", "geodesic-sphere-s3", "--rho", "-1"],
        &["check", "frobnicate", "--surface", "horosphere"],
        &["suite", "nightly"],
    ];
    for args in cases {
        let o = gaussmap(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = Command::new(env!("CARGO_BIN_EXE_gaussmap"))
        .args(["catalog"])
        .env("GAUSSMAP_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_with_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{
  "surface": "vertical-cylinder-h2xr",
  "params": {"kg": 1.4142135623730951},
  "space": "h2xr",
  "grid": [32, 32],
  "checks": ["hos", "perp"],
  "killing_vector": "vertical",
  "output": {"path": "out", "format": "json+csv"}
}"#,
    )
    .unwrap();
    let o = gaussmap(dir.path(), &["check", "--config", "run.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("threshold verdict: holds with equality"));
    assert!(stdout(&o).contains("perp dimension: 2"));
    let csv = fs::read_to_string(dir.path().join("out/hos-vertical-cylinder-h2xr-identity.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("u,v,value"));
    // boundary rows without a stencil are omitted
    assert_eq!(csv.lines().count(), 1 + 32 * 30);
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 3));

    // flags override the file
    let o = gaussmap(dir.path(), &["check", "duality", "--config", "run.json", "--grid", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn suite_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = gaussmap(dir.path(), &["suite", "quick", "--only", "h3", "--out", out]);
        assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    }
    let mut names: Vec<_> = fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() > 10);
    for n in &names {
        let a = fs::read(dir.path().join("a").join(n)).unwrap();
        let b = fs::read(dir.path().join("b").join(n)).unwrap();
        assert_eq!(a, b, "{n:?} differs");
    }
    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a/suite.json")).unwrap()).unwrap();
    assert_eq!(summary["profile"], "quick");
    assert_eq!(summary["only"], "h3");
}
