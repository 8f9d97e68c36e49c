use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ccz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccz"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

const REFERENCE: &str = include_str!("../../../configs/reference.toml");

#[test]
fn default_run_is_exact_ccz() {
    let out = ccz(&["run"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(num(&v["fidelity"]["avg_gate_fidelity"]) >= 1.0 - 1e-10);
    let tau = num(&v["tau_s"]);
    assert!((tau - 7.95e-9).abs() < 0.01 * 7.95e-9, "{tau}");
    assert_eq!(v["truth_table"].as_array().unwrap().len(), 8);
    assert_eq!(v["truth_table_pass"], Value::Bool(true));
    assert_eq!(num(&v["gate"]["real"][7][7]), -1.0);
}

#[test]
fn shipped_reference_config_matches_builtin_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "ref.toml", REFERENCE);
    assert_eq!(stdout(&ccz(&["run", "--config", &path])), stdout(&ccz(&["run"])));
    assert_eq!(stdout(&ccz(&["config", "--config", &path])), REFERENCE);
}

#[test]
fn simultaneous_run_falls_short_and_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "sim.toml",
        "mode = \"simultaneous\"\n[couplings]\ng1 = 220e6\ng2 = 220e6\ng3 = 220e6\n[pulse]\nrabi_over_g = 10\n",
    );
    let out = ccz(&["run", "--config", &path]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let f = num(&v["fidelity"]["avg_gate_fidelity"]);
    assert!(f < 1.0 && f > 0.5, "{f}");
    assert_eq!(v["mode"], "simultaneous");
}

#[test]
fn missing_coupling_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "bad.toml", "[couplings]\ng1 = 220e6\ng3 = 220e6\n");
    let out = ccz(&["run", "--config", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("couplings.g2"), "{}", stderr(&out));
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "syntax.toml", "[couplings]\ng1 = 220e6\ng2 = = 220e6\n");
    let out = ccz(&["run", "--config", &path]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("syntax.toml:3:"), "{err}");

    let path = write_config(dir.path(), "unknown.toml", "[cavity]\nn_max = 3\nphotons = 4\n");
    let err = stderr(&ccz(&["run", "--config", &path]));
    assert!(err.contains("unknown.toml:3:1:") && err.contains("photons"), "{err}");
}

#[test]
fn negative_lifetime_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let body = REFERENCE.replace("gamma3r_inv_s = 0.000001", "gamma3r_inv_s = -1.0");
    let path = write_config(dir.path(), "neg.toml", &body);
    let out = ccz(&["feasibility", "--config", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("decoherence.gamma3r_inv_s"), "{}", stderr(&out));
}

#[test]
fn sweep_rows_follow_input_order() {
    let out = ccz(&["sweep", "--ratios", "5,10,20,40"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ratio,infidelity,leakage,tau_s"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), ["5", "10", "20", "40"]);
    let infid: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(infid.windows(2).all(|w| w[1] < w[0]), "{infid:?}");

    let out = ccz(&["sweep", "--ratios", "40,inf,5"]);
    let text = stdout(&out);
    let ratios: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ratios, ["40", "inf", "5"]);
    let inf_row: f64 = text.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(inf_row < 1e-10);
}

#[test]
fn sweep_needs_two_ratios() {
    let out = ccz(&["sweep", "--ratios", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("ratios"));
    let out = ccz(&["sweep", "--ratios", "10,fast"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_json_on_request() {
    let out = ccz(&["sweep", "--ratios", "10,inf", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[1]["ratio"], "inf");
    assert!(num(&v[0]["infidelity"]) > 0.0);
}

#[test]
fn feasibility_at_defaults_passes() {
    let out = ccz(&["feasibility"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let kappa_inv = num(&v["kappa_inv_s"]);
    assert!((kappa_inv - 1.59e-6).abs() < 0.01 * 1.59e-6, "{kappa_inv}");
    let relax = num(&v["margins"]["tau_times_gamma3r"]);
    assert!((relax - 0.008).abs() < 1e-4, "{relax}");
    assert_eq!(v["pass"], Value::Bool(true));
}

#[test]
fn low_quality_cavity_fails_feasibility() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "q100.toml", &REFERENCE.replace("Q = 50000.0", "Q = 100.0"));
    let out = ccz(&["feasibility", "--config", &path, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("tau_over_kappa_inv_flagged,true"), "{text}");
    assert!(text.contains("pass,false"));
}

#[test]
fn feasibility_needs_decoherence_section() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "bare.toml", "[couplings]\ng1 = 1e8\ng2 = 1e8\ng3 = 1e8\n");
    let out = ccz(&["feasibility", "--config", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("decoherence"));
}

#[test]
fn decompose_lists_and_verifies() {
    let first = ccz(&["decompose"]);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 27);
    assert!(lines[..25]
        .iter()
        .enumerate()
        .all(|(i, l)| l.starts_with(&format!("{:02} ", i + 1))));
    assert_eq!(lines[25], "CZ=6 H=12 T-type=7");
    assert_eq!(lines[26], "equivalent to CCZ up to global phase: yes");
    assert_eq!(ccz(&["decompose"]).stdout, first.stdout);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = ccz(&["run", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let csv1 = ccz(&["run", "--format", "csv"]).stdout;
    assert_eq!(csv1, ccz(&["run", "--format", "csv"]).stdout);
    assert!(String::from_utf8(csv1)
        .unwrap()
        .starts_with("key,value\nmode,idealized\n"));
}

#[test]
fn schedule_text_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = ccz(&["schedule"]);
    assert_eq!(emitted.status.code(), Some(0));
    assert_eq!(stdout(&emitted).lines().count(), 15);
    let path = dir.path().join("sched.txt");
    std::fs::write(&path, &emitted.stdout).unwrap();
    let again = ccz(&["schedule", "--input", path.to_str().unwrap()]);
    assert_eq!(again.stdout, emitted.stdout);

    std::fs::write(&path, "wait t=1e-9\npulse q=4 lo=0 hi=2 phase=0 rabi=1e9 t=1e-9\n").unwrap();
    let bad = ccz(&["schedule", "--input", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("line 2"), "{}", stderr(&bad));
}
