//! One-parameter scans of the steady state and the passive-order crossovers
//! along them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{steady_state, StateVector};
use crate::engine::{build_generator, BathSpec, CavitySpec, EngineParams};
use crate::ergotropy::{incoherent_ergotropy, passive_state, quasiprobabilities, report_for_state, Signature};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

use super::observables::{flux, work};
use super::search::bisect_change;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "p_h")]
    PHot,
    #[serde(rename = "p_c")]
    PCold,
    #[serde(rename = "T_h")]
    THot,
    #[serde(rename = "n_ell")]
    NEll,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::PHot => "p_h",
            SweepVariable::PCold => "p_c",
            SweepVariable::THot => "T_h",
            SweepVariable::NEll => "n_ell",
        }
    }

    /// `params` with this variable set to `value`.
    pub fn apply(self, params: &EngineParams, value: f64) -> Result<EngineParams> {
        let mut p = params.clone();
        match self {
            SweepVariable::PHot => p.p_h = value,
            SweepVariable::PCold => p.p_c = value,
            SweepVariable::THot => match p.baths {
                BathSpec::Temperatures { t_c, .. } => p.baths = BathSpec::Temperatures { t_c, t_h: value },
                BathSpec::Occupations { .. } => {
                    return Err(Error::Config("cannot sweep T_h with injected bath occupations".into()))
                }
            },
            SweepVariable::NEll => p.cavity = CavitySpec::Occupation(value),
        }
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p_h" => Ok(SweepVariable::PHot),
            "p_c" => Ok(SweepVariable::PCold),
            "T_h" => Ok(SweepVariable::THot),
            "n_ell" => Ok(SweepVariable::NEll),
            other => Err(Error::Config(format!("unknown sweep variable `{other}`"))),
        }
    }
}

/// Missing fields default to a 201-point `p_h` scan over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec { variable: SweepVariable::PHot, from: 0.0, to: 1.0, steps: 201 }
    }
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, from: f64, to: f64, steps: usize) -> Self {
        SweepSpec { variable, from, to, steps }
    }

    /// Checks the grid and that both ends lie in the variable's domain.
    pub fn validate(&self, params: &EngineParams) -> Result<()> {
        if !(self.from < self.to) || self.steps < 2 {
            return Err(Error::Config(format!(
                "sweep needs from < to and steps >= 2 (from = {}, to = {}, steps = {})",
                self.from, self.to, self.steps
            )));
        }
        for v in [self.from, self.to] {
            self.variable
                .apply(params, v)
                .map_err(|e| Error::Config(format!("sweep end point {} = {v}: {e}", self.variable)))?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.to } else { self.from + (self.to - self.from) * (i as f64 / last) })
            .collect()
    }
}

/// Everything derived from one steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct RowData {
    pub state: StateVector,
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub signature: Signature,
    pub ergotropy: f64,
    pub e0: f64,
    pub ratio: Option<f64>,
    pub flux: f64,
    /// `None` when an upper population is not positive.
    pub work: Option<f64>,
    pub power: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variable: SweepVariable,
    pub value: f64,
    pub p_c: f64,
    pub p_h: f64,
    pub outcome: std::result::Result<RowData, String>,
}

impl SweepRow {
    pub fn data(&self) -> Option<&RowData> {
        self.outcome.as_ref().ok()
    }
}

/// Steady state and observables at one parameter point.
pub fn evaluate_point(params: &EngineParams) -> Result<RowData> {
    let state = steady_state(&build_generator(params)?)?;
    let e0 = incoherent_ergotropy(params)?;
    let report = report_for_state(&state, params, e0);
    let (rho_plus, rho_minus) = quasiprobabilities(&state);
    let j = flux(params, &state)?;
    let w = work(params, &state).ok();
    Ok(RowData {
        state,
        rho_plus,
        rho_minus,
        signature: report.signature,
        ergotropy: report.ergotropy,
        e0,
        ratio: report.ratio,
        flux: j,
        work: w,
        power: w.map(|w| j * w),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub params: EngineParams,
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.outcome.is_err())
    }
}

pub fn sweep(params: &EngineParams, spec: &SweepSpec) -> Result<Sweep> {
    sweep_with(Execution::default(), params, spec)
}

/// Rows are independent; a failing row is recorded, not propagated.
pub fn sweep_with(exec: Execution, params: &EngineParams, spec: &SweepSpec) -> Result<Sweep> {
    spec.validate(params)?;
    let grid = spec.grid();
    let rows = par::map(exec, &grid, |&value| {
        let outcome = spec.variable.apply(params, value).and_then(|p| {
            let data = evaluate_point(&p)?;
            Ok((p, data))
        });
        let (p_c, p_h) = match &outcome {
            Ok((p, _)) => (p.p_c, p.p_h),
            Err(_) => (params.p_c, params.p_h),
        };
        SweepRow {
            variable: spec.variable,
            value,
            p_c,
            p_h,
            outcome: outcome.map(|(_, d)| d).map_err(|e| e.to_string()),
        }
    });
    Ok(Sweep { params: params.clone(), spec: *spec, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    pub value: f64,
    pub before: Signature,
    pub after: Signature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverSet {
    pub variable: SweepVariable,
    pub boundaries: Vec<Crossover>,
}

impl CrossoverSet {
    /// Signatures in the order they are traversed, starting with `first`.
    pub fn signatures(&self, first: Signature) -> Vec<Signature> {
        std::iter::once(first).chain(self.boundaries.iter().map(|b| b.after)).collect()
    }
}

/// Bisection tolerance on the swept variable.
pub const CROSSOVER_TOLERANCE: f64 = 1e-6;

fn signature_at(params: &EngineParams, variable: SweepVariable, value: f64) -> Option<Signature> {
    let p = variable.apply(params, value).ok()?;
    let state = steady_state(&build_generator(&p).ok()?).ok()?;
    Some(passive_state(&state, &p).signature)
}

pub fn detect_crossovers(sweep: &Sweep) -> CrossoverSet {
    detect_crossovers_with(Execution::default(), sweep)
}

/// Refines every change of passive order between adjacent rows by bisection.
/// Several changes inside one grid cell are resolved one after another.
pub fn detect_crossovers_with(exec: Execution, sweep: &Sweep) -> CrossoverSet {
    let variable = sweep.spec.variable;
    let cells: Vec<(f64, Signature, f64, Signature)> = sweep
        .rows
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (w[0].data()?, w[1].data()?);
            (a.signature != b.signature).then_some((w[0].value, a.signature, w[1].value, b.signature))
        })
        .collect();
    let refined = par::map(exec, &cells, |&(lo, sig_lo, hi, sig_hi)| {
        refine_cell(&sweep.params, variable, lo, sig_lo, hi, sig_hi)
    });
    CrossoverSet { variable, boundaries: refined.into_iter().flatten().collect() }
}

fn refine_cell(
    params: &EngineParams,
    variable: SweepVariable,
    mut lo: f64,
    mut sig_lo: Signature,
    hi: f64,
    sig_hi: Signature,
) -> Vec<Crossover> {
    let mut out = Vec::new();
    while sig_lo != sig_hi && lo < hi {
        let (a, b, after) =
            bisect_change(lo, hi, &Some(sig_lo), CROSSOVER_TOLERANCE, |x| signature_at(params, variable, x));
        let Some(after) = after else { break };
        out.push(Crossover { value: 0.5 * (a + b), before: sig_lo, after });
        if b >= hi {
            break;
        }
        lo = b;
        sig_lo = after;
    }
    out
}
