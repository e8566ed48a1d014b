//! The five commands as library calls. Each returns a JSON summary for
//! standard output plus an outcome class; the binary maps that to an exit code.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::analysis::{detect_crossovers, flux, power, sweep, work};
use crate::dynamics::{evolve, steady_state};
use crate::engine::build_generator;
use crate::ergotropy::{incoherent_ergotropy, quasiprobabilities, report_for_state};
use crate::error::{Error, Result};

use super::config::{Command, RunConfig};
use super::figures::{build_figures, PanelStatus};
use super::files::write_atomic;
use super::tables::{sweep_csv, trajectory_csv};
use super::verify::run_verify;

pub const DEFAULT_OUT: &str = "qhe-out";

/// Fixed-step integration is flagged above this `dt * ||L||_inf`.
pub const STABILITY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    ConfigFailure,
    NumericFailure,
    VerificationFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::ConfigFailure => 1,
            Status::NumericFailure => 2,
            Status::VerificationFailure => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: Value,
    pub warnings: Vec<String>,
    pub status: Status,
}

impl Outcome {
    fn ok(stdout: Value) -> Self {
        Outcome { stdout, warnings: Vec::new(), status: Status::Success }
    }
}

/// Exit class for an error that aborted a command.
pub fn error_status(e: &Error) -> Status {
    if e.is_numeric() {
        Status::NumericFailure
    } else {
        Status::ConfigFailure
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({ "error": e.to_string(), "exit_code": error_status(e).exit_code() })
}

fn with_manifest(mut cfg: RunConfig, command: Command, outputs: Value) -> RunConfig {
    cfg.manifest = Some(json!({
        "command": command.name(),
        "generator_variant": cfg.params.variant.as_str(),
        "outputs": outputs,
    }));
    cfg
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn run(command: Command, cfg: RunConfig, out: Option<&Path>) -> Result<Outcome> {
    let cfg = cfg.for_command(command)?;
    let out_dir = |fallback: Option<&PathBuf>| -> PathBuf {
        out.map(Path::to_path_buf).or_else(|| fallback.cloned()).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    };
    match command {
        Command::Steady => cmd_steady(&cfg),
        Command::Evolve => cmd_evolve(cfg, &out_dir(None)),
        Command::Sweep => cmd_sweep(cfg, &out_dir(None)),
        Command::Figures => {
            let dir = out_dir(cfg.figures.as_ref().and_then(|f| f.out.as_ref()));
            cmd_figures(&cfg, &dir)
        }
        Command::Verify => cmd_verify(&cfg, out),
    }
}

pub fn cmd_steady(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.params;
    p.validate()?;
    let state = steady_state(&build_generator(p)?)?;
    let report = report_for_state(&state, p, incoherent_ergotropy(p)?);
    let (rho_plus, rho_minus) = quasiprobabilities(&state);
    let j = flux(p, &state)?;
    let w = work(p, &state).ok();
    let mut v = serde_json::to_value(&report)?;
    let obj = v.as_object_mut().expect("report is an object");
    obj.insert("state".into(), serde_json::to_value(state)?);
    obj.insert("rho_plus".into(), json!(rho_plus));
    obj.insert("rho_minus".into(), json!(rho_minus));
    obj.insert("flux".into(), json!(j));
    obj.insert("work".into(), json!(w));
    obj.insert("power".into(), json!(power(p, &state).ok()));
    obj.insert("generator_variant".into(), json!(p.variant.as_str()));
    Ok(Outcome::ok(v))
}

pub fn cmd_evolve(cfg: RunConfig, out: &Path) -> Result<Outcome> {
    let p = &cfg.params;
    p.validate()?;
    let block = cfg.evolve.clone().expect("evolve block filled in");
    let opts = block.options();
    let gen = build_generator(p)?;
    let mut warnings = Vec::new();
    let ratio = gen.stability_ratio(opts.dt);
    if ratio > STABILITY_LIMIT {
        warnings.push(format!(
            "warning: dt * ||L||_inf = {ratio:.3e} exceeds {STABILITY_LIMIT}; fixed-step integration may be inaccurate"
        ));
    }
    let traj = evolve(&gen, &block.init, &opts)?;
    let csv = out.join("trajectory.csv");
    let manifest = out.join("evolve.manifest.json");
    write_atomic(&csv, &trajectory_csv(&traj)?)?;
    write_json(&manifest, &with_manifest(cfg.clone(), Command::Evolve, json!({ "csv": "trajectory.csv" })))?;
    let (t_final, last) = traj.last().expect("trajectory keeps its final step");
    let (gap, gap_error) = match steady_state(&gen) {
        Ok(ss) => (Some(last.sup_distance(&ss)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(Outcome {
        stdout: json!({
            "csv": csv,
            "manifest": manifest,
            "rows": traj.len(),
            "final_time": t_final,
            "final_trace": last.trace(),
            "steady_state_gap": gap,
            "steady_state_error": gap_error,
            "stability_ratio": ratio,
        }),
        warnings,
        status: Status::Success,
    })
}

pub fn cmd_sweep(cfg: RunConfig, out: &Path) -> Result<Outcome> {
    let p = &cfg.params;
    p.validate()?;
    let spec = cfg.sweep.expect("sweep block filled in");
    let s = sweep(p, &spec)?;
    let crossovers = detect_crossovers(&s);
    let failures: Vec<Value> =
        s.failures().map(|r| json!({ "value": r.value, "error": r.outcome.as_ref().unwrap_err() })).collect();
    let signatures = s.rows.iter().find_map(|r| r.data()).map(|d| crossovers.signatures(d.signature));
    let csv = out.join("sweep.csv");
    let cross = out.join("crossovers.json");
    let manifest = out.join("sweep.manifest.json");
    write_atomic(&csv, &sweep_csv(&s)?)?;
    write_json(
        &cross,
        &json!({
            "variable": crossovers.variable,
            "boundaries": crossovers.boundaries,
            "signatures": signatures,
            "failures": failures,
        }),
    )?;
    write_json(
        &manifest,
        &with_manifest(cfg.clone(), Command::Sweep, json!({ "csv": "sweep.csv", "crossovers": "crossovers.json" })),
    )?;
    let mut warnings = Vec::new();
    if !failures.is_empty() {
        warnings.push(format!("warning: {} of {} sweep rows failed", failures.len(), s.rows.len()));
    }
    Ok(Outcome {
        stdout: json!({
            "csv": csv,
            "crossovers": cross,
            "manifest": manifest,
            "rows": s.rows.len(),
            "failed_rows": failures.len(),
            "boundaries": crossovers.boundaries,
        }),
        warnings,
        status: Status::Success,
    })
}

pub fn cmd_figures(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let block = cfg.figures.clone().expect("figures block filled in");
    let index = build_figures(&cfg.params, &block, out)?;
    let failed: Vec<_> = index
        .panels
        .iter()
        .filter_map(|(id, s)| match s {
            PanelStatus::Failed { numeric, .. } => Some((id.clone(), *numeric)),
            PanelStatus::Ok { .. } => None,
        })
        .collect();
    let status = if failed.is_empty() {
        Status::Success
    } else if failed.iter().any(|(_, numeric)| *numeric) {
        Status::NumericFailure
    } else {
        Status::ConfigFailure
    };
    let warnings = failed.iter().map(|(id, _)| format!("warning: panel `{id}` failed; see figures.json")).collect();
    Ok(Outcome { stdout: serde_json::to_value(&index)?, warnings, status })
}

pub fn cmd_verify(cfg: &RunConfig, out: Option<&Path>) -> Result<Outcome> {
    let block = cfg.verify.clone().expect("verify block filled in");
    let report = run_verify(&cfg.params, &block)?;
    if let Some(dir) = out {
        write_json(&dir.join("verify.json"), &report)?;
    }
    let status = if report.passed { Status::Success } else { Status::VerificationFailure };
    Ok(Outcome { stdout: serde_json::to_value(&report)?, warnings: Vec::new(), status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{EngineParams, GeneratorVariant};
    use crate::io::config::VerifyBlock;

    #[test]
    fn steady_reports_zero_ergotropy_at_weak_coherence() {
        let cfg = RunConfig::new(EngineParams { p_c: 0.1, p_h: 0.3, ..Default::default() });
        let o = run(Command::Steady, cfg, None).unwrap();
        assert_eq!(o.status, Status::Success);
        assert_eq!(o.stdout["signature"], json!(["+", "-", "bb", "aa"]));
        assert!(o.stdout["ergotropy"].as_f64().unwrap().abs() < 1e-12);
        assert!(o.stdout["flux"].is_f64());
    }

    #[test]
    fn steady_without_coherence_has_zero_rho12() {
        let cfg = RunConfig::new(EngineParams { p_c: 0.0, p_h: 0.0, ..Default::default() });
        let o = run(Command::Steady, cfg, None).unwrap();
        assert_eq!(o.stdout["state"]["rho12"].as_f64().unwrap(), 0.0);
    }

    #[test]
    fn verbatim_steady_is_numeric_failure() {
        let cfg = RunConfig::new(EngineParams { variant: GeneratorVariant::Verbatim, ..Default::default() });
        let e = run(Command::Steady, cfg, None).unwrap_err();
        assert_eq!(error_status(&e), Status::NumericFailure);
        assert_eq!(error_json(&e)["exit_code"], 2);
    }

    #[test]
    fn verify_failure_maps_to_three() {
        let mut cfg = RunConfig::new(EngineParams { variant: GeneratorVariant::Verbatim, ..Default::default() });
        cfg.verify = Some(VerifyBlock { random_cases: 10, oracle_cases: 10, ..Default::default() });
        let o = run(Command::Verify, cfg, None).unwrap();
        assert_eq!(o.status.exit_code(), 3);
    }

    #[test]
    fn evolve_writes_and_summarises() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(EngineParams::default()).for_command(Command::Evolve).unwrap();
        cfg.evolve.as_mut().unwrap().t_max = 1.0;
        cfg.evolve.as_mut().unwrap().dt = 0.2;
        let o = run(Command::Evolve, cfg, Some(dir.path())).unwrap();
        assert_eq!(o.warnings.len(), 1, "{:?}", o.warnings);
        assert_eq!(o.stdout["rows"], 6);
        assert!(dir.path().join("trajectory.csv").is_file());
        let m: RunConfig =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("evolve.manifest.json")).unwrap()).unwrap();
        assert_eq!(m.evolve.unwrap().dt, 0.2);
    }

    #[test]
    fn sweep_of_two_steps() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(EngineParams::default());
        cfg.sweep = Some(crate::analysis::SweepSpec::new(crate::analysis::SweepVariable::PHot, 0.0, 1.0, 2));
        let o = run(Command::Sweep, cfg, Some(dir.path())).unwrap();
        assert_eq!(o.stdout["rows"], 2);
        let cross: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("crossovers.json")).unwrap()).unwrap();
        assert!(cross["boundaries"].is_array());
    }
}
