use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qhe(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhe")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn steady_zero_ergotropy_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["steady", "--set", "params.p_c=0.1", "--set", "params.p_h=0.3"], dir.path());
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["signature"], serde_json::json!(["+", "-", "bb", "aa"]));
    assert!(v["ergotropy"].as_f64().unwrap().abs() < 1e-12);
    assert!(v["ratio"].is_null());
    for key in ["state", "flux", "work", "power", "e0", "closed_form", "closed_form_gap"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn malformed_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.json"), "{\"params\": {").unwrap();
    let o = qhe(&["steady", "--config", "broken.json"], dir.path());
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["exit_code"], 1);

    std::fs::write(dir.path().join("typo.json"), r#"{"params": {"p_hot": 0.3}}"#).unwrap();
    let o = qhe(&["steady", "--config", "typo.json"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout_json(&o)["error"].as_str().unwrap().contains("p_hot"));
}

#[test]
fn bad_flags_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&qhe(&["steady", "--variant", "nope"], dir.path())), 1);
    assert_eq!(code(&qhe(&["launch"], dir.path())), 1);
    assert_eq!(code(&qhe(&["steady", "--set", "no_equals_sign"], dir.path())), 1);
}

#[test]
fn verbatim_steady_is_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["steady", "--variant", "verbatim"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stdout_json(&o)["error"].as_str().unwrap().contains("steady state"));
}

#[test]
fn foreign_command_block_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["steady", "--set", "sweep.steps=5"], dir.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn evolve_stride_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(
        &["evolve", "--out", "o", "--set", "evolve.t_max=1", "--set", "evolve.dt=0.001", "--set", "evolve.stride=10"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["rows"], 101);
    assert!((v["final_trace"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let csv = std::fs::read_to_string(dir.path().join("o/trajectory.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,rho11,rho22,rhoaa,rhobb,rho12,p_plus,p_minus,trace");
    assert_eq!(lines.len(), 102);
    assert!(lines[2].starts_with("1.0000000000000000e-2,"));
    assert!(o.stderr.is_empty());
}

#[test]
fn evolve_reaches_steady_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["evolve", "--out", "o", "--set", "evolve.stride=1000"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout_json(&o)["steady_state_gap"].as_f64().unwrap() < 1e-6);
}

#[test]
fn large_step_warns_then_diverges() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["evolve", "--out", "o", "--set", "evolve.t_max=2", "--set", "evolve.dt=0.05"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));

    let o = qhe(&["evolve", "--out", "o", "--set", "evolve.t_max=100", "--set", "evolve.dt=2"], dir.path());
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(stdout_json(&o)["error"].as_str().unwrap().contains("diverged"));
}

#[test]
fn sweep_invalid_variable_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["sweep", "--set", "sweep.variable=g"], dir.path());
    assert_eq!(code(&o), 1);
    let o = qhe(&["sweep", "--set", "sweep.steps=1"], dir.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn sweep_two_steps() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["sweep", "--out", "o", "--set", "sweep.steps=2"], dir.path());
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("o/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with(
        "var_name,var_value,p_c,p_h,rho11,rhoaa,rhobb,rho12,rho_plus,rho_minus,signature,ergotropy,e0,ratio,flux,work,power\n"
    ));
    let cross: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/crossovers.json")).unwrap()).unwrap();
    assert!(cross["boundaries"].is_array());
    assert!(cross["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verbatim_sweep_flags_rows_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["sweep", "--out", "o", "--variant", "verbatim", "--set", "sweep.steps=3"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["failed_rows"], 3);
    let csv = std::fs::read_to_string(dir.path().join("o/sweep.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().ends_with(",,,,,,,,,,,,,"));
}

fn round_trip(command: &str, extra: &[&str], manifest: &str, csv: &str) {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![command, "--out", "a"];
    args.extend_from_slice(extra);
    assert_eq!(code(&qhe(&args, dir.path())), 0);
    let m = format!("a/{manifest}");
    let o = qhe(&[command, "--out", "b", "--config", &m], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let a = std::fs::read(dir.path().join("a").join(csv)).unwrap();
    let b = std::fs::read(dir.path().join("b").join(csv)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn manifests_reproduce_csv() {
    round_trip(
        "sweep",
        &["--set", "params.p_c=0.2", "--set", "sweep.steps=21", "--set", "sweep.to=0.9"],
        "sweep.manifest.json",
        "sweep.csv",
    );
    round_trip(
        "evolve",
        &["--set", "evolve.t_max=3", "--set", "evolve.stride=7"],
        "evolve.manifest.json",
        "trajectory.csv",
    );
    round_trip(
        "figures",
        &["--set", "figures.panels=[\"steady_pc02\"]", "--set", "figures.steps=11"],
        "steady_pc02.manifest.json",
        "steady_pc02.csv",
    );
}

#[test]
fn figures_honours_config_out_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["figures", "--set", "figures.panels=[\"transient\"]", "--set", "figures.out=cfgdir"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("cfgdir/transient.svg").is_file());
    let o = qhe(
        &["figures", "--out", "flagdir", "--set", "figures.panels=[\"transient\"]", "--set", "figures.out=cfgdir2"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("flagdir/figures.json").is_file());
    assert!(!dir.path().join("cfgdir2").exists());
}

#[test]
fn verify_default_passes_and_verbatim_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = qhe(&["verify", "--out", "v"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = stdout_json(&o);
    let names: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"trace_conservation") && names.contains(&"dilute_inversion_boundary"));
    assert!(dir.path().join("v/verify.json").is_file());

    let o = qhe(&["verify", "--variant", "verbatim", "--set", "verify.random_cases=10"], dir.path());
    assert_eq!(code(&o), 3);
    let v = stdout_json(&o);
    let sums = &v["suites"][0]["details"]["population_column_sums"];
    assert!((sums[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}
