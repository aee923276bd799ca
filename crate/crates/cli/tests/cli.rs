use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn sioux_falls() -> String {
    repo("data/SiouxFalls_net.tntp").display().to_string()
}

fn run_with(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_clearsearch"));
    cmd.args(args).env_remove("CLEARSEARCH_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with(args, &[])
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn validate(schema_file: &str, value: &Value) {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(repo(schema_file)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:#?}");
}

fn csv_columns(kind: &str) -> String {
    let cols: Value = serde_json::from_str(&std::fs::read_to_string(repo("schemas/csv_columns.json")).unwrap()).unwrap();
    cols[kind].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect::<Vec<_>>().join(",")
}

/// Rows of a CSV as maps from column name to value.
fn csv_records(text: &str) -> Vec<std::collections::HashMap<String, f64>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    lines
        .map(|l| header.iter().map(|h| h.to_string()).zip(l.split(',').map(|v| v.parse().unwrap())).collect())
        .collect()
}

#[test]
fn line_examples() {
    let v = json(&run(&["line", "--rho", "4", "--T", "64"]));
    assert_eq!(v["clearance"], 44.0);
    assert_eq!(v["lengths"], serde_json::json!([4.0, 12.0, 32.0]));
    assert_eq!(v["which"], "prefix");
    validate("schemas/solve.schema.json", &v);

    let v = json(&run(&["line", "--rho", "4", "--L", "44"]));
    assert!((v["duration"].as_f64().unwrap() - 64.0).abs() < 1e-9);
    validate("schemas/solve.schema.json", &v);
}

#[test]
fn line_exit_codes() {
    assert_eq!(code(&run(&["line", "--rho", "3", "--T", "10"])), 2);
    assert_eq!(code(&run(&["line", "--rho", "4"])), 2);
    assert_eq!(code(&run(&["line", "--rho", "4", "--T", "10", "--L", "5"])), 2);
    assert_eq!(code(&run(&["line", "--rho", "abc", "--T", "10"])), 2);
    assert_eq!(code(&run(&["line", "--rho", "4", "--T", "0.5"])), 3);
}

#[test]
fn star_output_validates() {
    for args in [
        &["star", "--m", "4", "--R-mult", "1", "--T", "1e8"][..],
        &["star", "--m", "3", "--rho", "10", "--L", "500"][..],
        &["star", "--m", "5", "--rho", "20", "--T", "3"][..],
    ] {
        let v = json(&run(args));
        validate("schemas/solve.schema.json", &v);
        assert_eq!(v["slacks"]["feasible"], true, "{args:?}");
    }
    assert_eq!(code(&run(&["star", "--m", "4", "--rho", "2", "--T", "100"])), 2);
    assert_eq!(code(&run(&["star", "--m", "4", "--rho", "10", "--T", "0.1"])), 3);
}

#[test]
fn star_compare_examples() {
    let text = stdout(&run(&["star-compare", "--m", "4", "--T-grid", "1e8"]));
    assert_eq!(text.lines().next().unwrap(), csv_columns("star-compare"));
    let rows = csv_records(&text);
    assert_eq!(rows.len(), 1);
    assert!(rows[0]["ratio_opt_over_geo"] >= 1.2);

    let rows = csv_records(&stdout(&run(&["star-compare", "--preset", "table2"])));
    assert_eq!(rows.len(), 28);
    let cell = |m: f64, r_row: usize| rows.iter().filter(|r| r["m"] == m).nth(r_row).unwrap()["ratio_opt_over_scaled_aggressive"];
    assert!((cell(4.0, 0) - 1.197).abs() <= 0.03);
    assert!((cell(100.0, 3) - 1.894).abs() <= 0.03);
}

#[test]
fn star_compare_grids() {
    let rows = csv_records(&stdout(&run(&["star-compare", "--m-grid", "3,5", "--T", "1e4"])));
    assert_eq!(rows.iter().map(|r| r["m"]).collect::<Vec<_>>(), vec![3.0, 5.0]);
    let rows = csv_records(&stdout(&run(&["star-compare", "--R-grid", "lin:1:3:3", "--T", "1e4"])));
    assert_eq!(rows.len(), 3);
    assert!(rows[0]["rho"] < rows[1]["rho"]);
    for bad in [&["--T-grid", "lin:1:2"][..], &["--m-grid", "2.5"], &["--R-grid", "0.5"], &["--T-grid", "1e4", "--m-grid", "3"], &[]] {
        let mut args = vec!["star-compare"];
        args.extend_from_slice(bad);
        assert_eq!(code(&run(&args)), 2, "{bad:?}");
    }
}

#[test]
fn star_compare_matches_golden_file() {
    let text = stdout(&run(&["star-compare", "--m", "4", "--T-grid", "log:2:8:4"]));
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/star_compare_m4.csv")).unwrap();
    assert_eq!(text, golden);
}

#[test]
fn net_run_summary_and_curves() {
    let dir = tempfile::tempdir().unwrap();
    let curves = dir.path().join("curves");
    let out = dir.path().join("summary.json");
    let sf = sioux_falls();
    let args = [
        "net-run", "--tntp", &sf, "--root", "random:3", "--runs", "3", "--T", "400", "--mode", "rpt", "--open-ended",
        "--curves", curves.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ];
    assert!(stdout(&run(&args)).is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    validate("schemas/net_run.schema.json", &v);
    assert_eq!(v["network"]["vertices"], 24);
    assert_eq!(v["network"]["edges"], 38);
    assert_eq!(v["runs"].as_array().unwrap().len(), 3);

    let mut files: Vec<_> = std::fs::read_dir(&curves).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 3);
    for (f, report) in files.iter().zip(v["runs"].as_array().unwrap()) {
        let text = std::fs::read_to_string(f).unwrap();
        assert_eq!(text.lines().next().unwrap(), csv_columns("net-run-curve"));
        let rows = csv_records(&text);
        let last = rows.last().unwrap();
        assert!(f.file_name().unwrap().to_str().unwrap().ends_with(&format!("root_{}.csv", report["root"])));
        assert!((last["clearance"] - report["clearance_at_T"].as_f64().unwrap()).abs() < 1e-6);
        assert!(rows.windows(2).all(|w| w[1]["time"] >= w[0]["time"] && w[1]["clearance"] >= w[0]["clearance"]));
    }
}

#[test]
fn rpt_rounds_end_no_later_than_cpt_rounds() {
    let sf = sioux_falls();
    let mode_runs = |mode: &str| {
        let v = json(&run(&["net-run", "--tntp", &sf, "--root", "random:11", "--runs", "5", "--T", "5000", "--mode", mode]));
        v["runs"].as_array().unwrap().clone()
    };
    let (cpt, rpt) = (mode_runs("cpt"), mode_runs("rpt"));
    for (a, b) in cpt.iter().zip(&rpt) {
        assert_eq!(a["root"], b["root"]);
        for (ra, rb) in a["rounds"].as_array().unwrap().iter().zip(b["rounds"].as_array().unwrap()) {
            assert!(rb["end_time"].as_f64().unwrap() <= ra["end_time"].as_f64().unwrap() + 1e-9);
        }
    }
}

#[test]
fn output_is_identical_across_runs_and_thread_counts() {
    let sf = sioux_falls();
    let sweep = ["net-sweep", "--tntp", &sf, "--root", "random:5", "--runs", "4", "--T", "3000", "--r-grid", "1.5,2,3"];
    let a = stdout(&run_with(&sweep, &[("CLEARSEARCH_THREADS", "1")]));
    let b = stdout(&run_with(&sweep, &[("CLEARSEARCH_THREADS", "4")]));
    let c = stdout(&run(&sweep));
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.lines().next().unwrap(), csv_columns("net-sweep"));
    assert_eq!(a.lines().count(), 4);

    let runs = ["net-run", "--tntp", &sf, "--root", "random:9", "--runs", "6", "--T", "700"];
    assert_eq!(stdout(&run_with(&runs, &[("CLEARSEARCH_THREADS", "1")])), stdout(&run_with(&runs, &[("CLEARSEARCH_THREADS", "3")])));

    let table = ["star-compare", "--preset", "fig2"];
    assert_eq!(stdout(&run_with(&table, &[("CLEARSEARCH_THREADS", "1")])), stdout(&run(&table)));
}

#[test]
fn net_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tntp");
    std::fs::write(&bad, "<NUMBER OF LINKS> 2\n<END OF METADATA>\n1 2 100 5 ;\n2 x 100 5 ;\n").unwrap();
    let out = run(&["net-run", "--tntp", bad.to_str().unwrap(), "--T", "10"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let sf = sioux_falls();
    assert_eq!(code(&run(&["net-run", "--tntp", &sf, "--T", "10", "--r", "1"])), 2);
    assert_eq!(code(&run(&["net-run", "--tntp", &sf, "--T", "10", "--root", "999"])), 2);
    assert_eq!(code(&run(&["net-run", "--tntp", &sf, "--T", "10", "--root", "random:x"])), 2);
    assert_eq!(code(&run(&["net-run", "--tntp", &sf, "--T", "10", "--mode", "fast"])), 2);
    assert_eq!(code(&run(&["net-sweep", "--tntp", &sf, "--T", "10", "--r-grid", "0.5,2"])), 2);
    assert_eq!(code(&run_with(&["net-run", "--tntp", &sf, "--T", "10"], &[("CLEARSEARCH_THREADS", "zero")])), 2);
}
