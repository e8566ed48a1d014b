use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::EngineParams;
use crate::ergotropy::ergotropy_general;
use crate::error::{Error, Result};

use super::search::golden_section_max;
use super::sweep::{evaluate_point, sweep, RowData, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Flux,
    Power,
    Ergotropy,
}

impl Metric {
    pub fn of(self, row: &RowData) -> f64 {
        match self {
            Metric::Flux => row.flux,
            Metric::Power => row.power.unwrap_or(f64::NAN),
            Metric::Ergotropy => row.ergotropy,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Flux => "flux",
            Metric::Power => "power",
            Metric::Ergotropy => "ergotropy",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flux" => Ok(Metric::Flux),
            "power" => Ok(Metric::Power),
            "ergotropy" => Ok(Metric::Ergotropy),
            other => Err(Error::Config(format!("unknown metric `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum {
    pub metric: Metric,
    pub argmax: f64,
    pub value: f64,
    /// Ergotropy of the steady state at `argmax`.
    pub ergotropy: f64,
    /// The metric varied by less than [`FLAT_RANGE`] over the grid; `argmax`
    /// is then the grid start.
    pub degenerate: bool,
}

pub const FLAT_RANGE: f64 = 1e-15;
pub const ARGMAX_TOLERANCE: f64 = 1e-6;

/// Coarse grid maximum refined by golden-section search on the neighbouring cells.
pub fn optimize(metric: Metric, params: &EngineParams, spec: &SweepSpec) -> Result<Optimum> {
    let sw = sweep(params, spec)?;
    let values: Vec<f64> = sw.rows.iter().map(|r| r.data().map_or(f64::NAN, |d| metric.of(d))).collect();
    let finite = values.iter().copied().filter(|v| v.is_finite());
    let (min, max) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !max.is_finite() {
        return Err(Error::Domain(format!("{metric} is undefined over the whole sweep")));
    }
    let at = |x: f64| -> Result<(f64, RowData)> {
        let p = spec.variable.apply(params, x)?;
        let d = evaluate_point(&p)?;
        Ok((ergotropy_general(&d.state, &p), d))
    };

    if max - min < FLAT_RANGE {
        let (i, _) = values.iter().enumerate().find(|(_, v)| v.is_finite()).unwrap();
        let x = sw.rows[i].value;
        let (e, _) = at(x)?;
        return Ok(Optimum { metric, argmax: x, value: values[i], ergotropy: e, degenerate: true });
    }

    let i = values.iter().enumerate().filter(|(_, v)| v.is_finite()).fold(0, |best, (k, &v)| {
        if v > values[best] || !values[best].is_finite() {
            k
        } else {
            best
        }
    });
    let grid: Vec<f64> = sw.rows.iter().map(|r| r.value).collect();
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let f = |x: f64| at(x).map(|(_, d)| metric.of(&d)).unwrap_or(f64::NEG_INFINITY);
    let (mut x, mut v) = golden_section_max(lo, hi, ARGMAX_TOLERANCE, f);
    if !(v >= values[i]) {
        x = grid[i];
        v = values[i];
    }
    let (e, _) = at(x)?;
    Ok(Optimum { metric, argmax: x, value: v, ergotropy: e, degenerate: false })
}
