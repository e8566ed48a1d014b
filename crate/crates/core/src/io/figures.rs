//! Canonical panels: fixed parameter sets rendered as CSV + SVG + manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::analysis::{sweep, Metric, Sweep, SweepSpec, SweepVariable};
use crate::dynamics::{evolve, EvolveOptions, StateVector, Trajectory};
use crate::engine::{build_generator, EngineParams};
use crate::ergotropy::quasiprobabilities;
use crate::error::{Error, Result};
use crate::par::{self, Execution};

use super::config::{FiguresBlock, RunConfig};
use super::files::write_atomic;
use super::svg::{LineChart, Series};
use super::tables::{stacked_sweep_csv, sweep_csv, trajectory_csv};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Transient { p_c: f64, p_h: f64, t_max: f64, dt: f64, stride: usize },
    Populations { p_c: f64, t_h: Option<f64> },
    Ratio { p_c: f64, t_h: f64, from: f64, to: f64 },
    Tradeoff { metric: Metric, p_cs: [f64; 3] },
}

#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub id: &'static str,
    pub description: &'static str,
    kind: Kind,
}

const TRADEOFF_PC: [f64; 3] = [0.1, 0.2, 0.6];

pub const PANELS: [Panel; 10] = [
    Panel {
        id: "transient",
        description: "populations and quasiprobabilities relaxing from the ground doublet",
        kind: Kind::Transient { p_c: 0.1, p_h: 0.5, t_max: 20.0, dt: 1e-3, stride: 100 },
    },
    Panel {
        id: "steady_pc01",
        description: "steady-state passive spectrum vs p_h at p_c = 0.1",
        kind: Kind::Populations { p_c: 0.1, t_h: None },
    },
    Panel {
        id: "steady_pc02",
        description: "steady-state passive spectrum vs p_h at p_c = 0.2",
        kind: Kind::Populations { p_c: 0.2, t_h: None },
    },
    Panel {
        id: "steady_th5",
        description: "steady-state passive spectrum vs p_h at T_h = 5, p_c = 0.1",
        kind: Kind::Populations { p_c: 0.1, t_h: Some(5.0) },
    },
    Panel {
        id: "ratio_low",
        description: "E/E0 vs p_h on [0, 0.28] at T_h = 5, p_c = 0.1",
        kind: Kind::Ratio { p_c: 0.1, t_h: 5.0, from: 0.0, to: 0.28 },
    },
    Panel {
        id: "ratio_mid",
        description: "E/E0 vs p_h on [0.28, 0.65] at T_h = 5, p_c = 0.1",
        kind: Kind::Ratio { p_c: 0.1, t_h: 5.0, from: 0.28, to: 0.65 },
    },
    Panel {
        id: "ratio_high",
        description: "E/E0 vs p_h on [0.65, 1] at T_h = 5, p_c = 0.1",
        kind: Kind::Ratio { p_c: 0.1, t_h: 5.0, from: 0.65, to: 1.0 },
    },
    Panel {
        id: "steady_pc06",
        description: "steady-state passive spectrum vs p_h at p_c = 0.6",
        kind: Kind::Populations { p_c: 0.6, t_h: None },
    },
    Panel {
        id: "tradeoff_flux",
        description: "flux against ergotropy along p_h sweeps for p_c = 0.1, 0.2, 0.6",
        kind: Kind::Tradeoff { metric: Metric::Flux, p_cs: TRADEOFF_PC },
    },
    Panel {
        id: "tradeoff_power",
        description: "power against ergotropy along p_h sweeps for p_c = 0.1, 0.2, 0.6",
        kind: Kind::Tradeoff { metric: Metric::Power, p_cs: TRADEOFF_PC },
    },
];

pub fn panel(id: &str) -> Option<&'static Panel> {
    PANELS.iter().find(|p| p.id == id)
}

fn panel_params(base: &EngineParams, p_c: f64, p_h: f64, t_h: Option<f64>) -> Result<EngineParams> {
    let mut p = EngineParams { p_c, p_h, ..base.clone() };
    if let Some(t) = t_h {
        p = SweepVariable::THot.apply(&p, t)?;
    }
    p.validate()?;
    Ok(p)
}

/// Rendered files for one panel, before they are written.
struct Rendered {
    csv: Vec<u8>,
    svg: String,
    params: Vec<EngineParams>,
}

fn ph_spec(from: f64, to: f64, steps: usize) -> SweepSpec {
    SweepSpec::new(SweepVariable::PHot, from, to, steps)
}

fn column(s: &Sweep, f: impl Fn(&crate::analysis::RowData) -> f64) -> Vec<(f64, f64)> {
    s.rows.iter().map(|r| (r.value, r.data().map_or(f64::NAN, &f))).collect()
}

fn spectrum_chart(title: String, s: &Sweep) -> LineChart {
    LineChart {
        title,
        x_label: "p_h".into(),
        y_label: "steady-state value".into(),
        series: vec![
            Series::new("rho+", column(s, |d| d.rho_plus)),
            Series::new("rho-", column(s, |d| d.rho_minus)),
            Series::new("rhobb", column(s, |d| d.state.rhobb)),
            Series::new("rhoaa", column(s, |d| d.state.rhoaa)),
            Series::new("ergotropy", column(s, |d| d.ergotropy)),
        ],
    }
}

fn transient_chart(title: String, traj: &Trajectory) -> LineChart {
    let pick = |f: &dyn Fn(&StateVector) -> f64| -> Vec<(f64, f64)> {
        traj.times.iter().zip(&traj.states).map(|(t, s)| (*t, f(s))).collect()
    };
    LineChart {
        title,
        x_label: "t".into(),
        y_label: "value".into(),
        series: vec![
            Series::new("rho+", pick(&|s| quasiprobabilities(s).0)),
            Series::new("rho-", pick(&|s| quasiprobabilities(s).1)),
            Series::new("rhobb", pick(&|s| s.rhobb)),
            Series::new("rhoaa", pick(&|s| s.rhoaa)),
        ],
    }
}

fn render(panel: &Panel, base: &EngineParams, steps: usize) -> Result<Rendered> {
    let title = format!("{}: {}", panel.id, panel.description);
    match panel.kind {
        Kind::Transient { p_c, p_h, t_max, dt, stride } => {
            let p = panel_params(base, p_c, p_h, None)?;
            let traj = evolve(&build_generator(&p)?, &StateVector::default(), &EvolveOptions { t_max, dt, stride })?;
            Ok(Rendered { csv: trajectory_csv(&traj)?, svg: transient_chart(title, &traj).render(), params: vec![p] })
        }
        Kind::Populations { p_c, t_h } => {
            let p = panel_params(base, p_c, 0.0, t_h)?;
            let s = sweep(&p, &ph_spec(0.0, 1.0, steps))?;
            Ok(Rendered { csv: sweep_csv(&s)?, svg: spectrum_chart(title, &s).render(), params: vec![p] })
        }
        Kind::Ratio { p_c, t_h, from, to } => {
            let p = panel_params(base, p_c, from, Some(t_h))?;
            let s = sweep(&p, &ph_spec(from, to, steps))?;
            let chart = LineChart {
                title,
                x_label: "p_h".into(),
                y_label: "E/E0".into(),
                series: vec![Series::new("E/E0", column(&s, |d| d.ratio.unwrap_or(f64::NAN)))],
            };
            Ok(Rendered { csv: sweep_csv(&s)?, svg: chart.render(), params: vec![p] })
        }
        Kind::Tradeoff { metric, p_cs } => {
            let mut sweeps = Vec::new();
            let mut params = Vec::new();
            for p_c in p_cs {
                let p = panel_params(base, p_c, 0.0, None)?;
                sweeps.push(sweep(&p, &ph_spec(0.0, 1.0, steps))?);
                params.push(p);
            }
            let series = sweeps
                .iter()
                .zip(p_cs)
                .map(|(s, p_c)| {
                    let pts = s.rows.iter().filter_map(|r| r.data()).map(|d| (d.ergotropy, metric.of(d))).collect();
                    Series::new(format!("p_c = {p_c}"), pts)
                })
                .collect();
            let chart = LineChart { title, x_label: "ergotropy".into(), y_label: metric.to_string(), series };
            Ok(Rendered { csv: stacked_sweep_csv(&sweeps)?, svg: chart.render(), params })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PanelStatus {
    Ok { description: String, csv: PathBuf, svg: PathBuf, manifest: PathBuf },
    Failed { description: String, error: String, numeric: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureIndex {
    pub out: PathBuf,
    pub panels: BTreeMap<String, PanelStatus>,
}

impl FigureIndex {
    pub fn all_ok(&self) -> bool {
        self.panels.values().all(|s| matches!(s, PanelStatus::Ok { .. }))
    }
}

/// Config that reproduces exactly one panel.
pub fn panel_manifest(base: &EngineParams, panel: &Panel, steps: usize, used: &[EngineParams]) -> RunConfig {
    let mut cfg = RunConfig::new(base.clone());
    cfg.figures = Some(FiguresBlock { panels: Some(vec![panel.id.to_string()]), steps, out: None });
    cfg.manifest = Some(json!({
        "command": "figures",
        "panel": panel.id,
        "description": panel.description,
        "generator_variant": base.variant.as_str(),
        "cavity": "taken from params (n_ell defaults to 0, an empty cavity)",
        "panel_params": used,
    }));
    cfg
}

fn selected(block: &FiguresBlock) -> Result<Vec<&'static Panel>> {
    match &block.panels {
        None => Ok(PANELS.iter().collect()),
        Some(ids) => ids
            .iter()
            .map(|id| {
                panel(id).ok_or_else(|| {
                    let known: Vec<_> = PANELS.iter().map(|p| p.id).collect();
                    Error::Config(format!("unknown panel `{id}` (known: {})", known.join(", ")))
                })
            })
            .collect(),
    }
}

fn produce(panel: &Panel, base: &EngineParams, steps: usize, out: &Path) -> PanelStatus {
    let description = panel.description.to_string();
    let attempt = || -> Result<PanelStatus> {
        let r = render(panel, base, steps)?;
        let csv = out.join(format!("{}.csv", panel.id));
        let svg = out.join(format!("{}.svg", panel.id));
        let manifest = out.join(format!("{}.manifest.json", panel.id));
        let m = panel_manifest(base, panel, steps, &r.params);
        write_atomic(&csv, &r.csv)?;
        write_atomic(&svg, r.svg.as_bytes())?;
        write_atomic(&manifest, serde_json::to_string_pretty(&m)?.as_bytes())?;
        Ok(PanelStatus::Ok { description: description.clone(), csv, svg, manifest })
    };
    attempt().unwrap_or_else(|e| PanelStatus::Failed {
        description: description.clone(),
        error: e.to_string(),
        numeric: e.is_numeric(),
    })
}

/// Produces every selected panel (concurrently when enabled) and writes
/// `figures.json` with the per-panel status.
pub fn build_figures(base: &EngineParams, block: &FiguresBlock, out: &Path) -> Result<FigureIndex> {
    base.validate()?;
    if block.steps < 2 {
        return Err(Error::Config("figures.steps must be at least 2".into()));
    }
    let panels = selected(block)?;
    let statuses = par::map(Execution::default(), &panels, |p| produce(p, base, block.steps, out));
    let index =
        FigureIndex { out: out.to_path_buf(), panels: panels.iter().map(|p| p.id.to_string()).zip(statuses).collect() };
    write_atomic(&out.join("figures.json"), serde_json::to_string_pretty(&index)?.as_bytes())?;
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(ids: &[&str], steps: usize) -> FiguresBlock {
        FiguresBlock { panels: Some(ids.iter().map(|s| s.to_string()).collect()), steps, out: None }
    }

    #[test]
    fn panel_ids_are_unique() {
        let mut ids: Vec<_> = PANELS.iter().map(|p| p.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), PANELS.len());
    }

    #[test]
    fn unknown_panel_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = build_figures(&EngineParams::default(), &block(&["nope"], 11), dir.path()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn panel_files_and_index_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let idx =
            build_figures(&EngineParams::default(), &block(&["steady_pc01", "tradeoff_flux"], 11), dir.path()).unwrap();
        assert!(idx.all_ok(), "{idx:?}");
        for id in ["steady_pc01", "tradeoff_flux"] {
            for ext in ["csv", "svg", "manifest.json"] {
                assert!(dir.path().join(format!("{id}.{ext}")).is_file());
            }
        }
        let stacked = std::fs::read_to_string(dir.path().join("tradeoff_flux.csv")).unwrap();
        assert_eq!(stacked.lines().count(), 1 + 3 * 11);
        assert!(dir.path().join("figures.json").is_file());
    }

    #[test]
    fn injected_baths_fail_hot_temperature_panels_only() {
        let dir = tempfile::tempdir().unwrap();
        let base = EngineParams::default().with_occupations(0.1, 1.0);
        let idx = build_figures(&base, &block(&["steady_pc01", "steady_th5"], 5), dir.path()).unwrap();
        assert!(matches!(idx.panels["steady_pc01"], PanelStatus::Ok { .. }));
        assert!(matches!(idx.panels["steady_th5"], PanelStatus::Failed { numeric: false, .. }));
        assert!(!idx.all_ok());
    }

    #[test]
    fn manifest_reproduces_panel_csv() {
        let dir = tempfile::tempdir().unwrap();
        let base = EngineParams::default();
        build_figures(&base, &block(&["ratio_mid"], 9), dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("ratio_mid.manifest.json")).unwrap();
        let cfg: RunConfig = serde_json::from_str(&text).unwrap();
        let again = tempfile::tempdir().unwrap();
        build_figures(&cfg.params, cfg.figures.as_ref().unwrap(), again.path()).unwrap();
        let a = std::fs::read(dir.path().join("ratio_mid.csv")).unwrap();
        let b = std::fs::read(again.path().join("ratio_mid.csv")).unwrap();
        assert_eq!(a, b);
    }
}
