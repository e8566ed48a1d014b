//! Run configuration: one JSON document plus `key.path=value` overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::analysis::SweepSpec;
use crate::dynamics::{EvolveOptions, StateVector};
use crate::engine::{EngineParams, GeneratorVariant};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Steady,
    Evolve,
    Sweep,
    Figures,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Steady => "steady",
            Command::Evolve => "evolve",
            Command::Sweep => "sweep",
            Command::Figures => "figures",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveBlock {
    #[serde(default)]
    pub init: StateVector,
    #[serde(default = "EvolveBlock::default_t_max")]
    pub t_max: f64,
    #[serde(default = "EvolveBlock::default_dt")]
    pub dt: f64,
    #[serde(default = "EvolveBlock::default_stride")]
    pub stride: usize,
}

impl EvolveBlock {
    fn default_t_max() -> f64 {
        50.0
    }
    fn default_dt() -> f64 {
        1e-3
    }
    fn default_stride() -> usize {
        1
    }

    pub fn options(&self) -> EvolveOptions {
        EvolveOptions { t_max: self.t_max, dt: self.dt, stride: self.stride }
    }
}

impl Default for EvolveBlock {
    fn default() -> Self {
        EvolveBlock {
            init: StateVector::default(),
            t_max: Self::default_t_max(),
            dt: Self::default_dt(),
            stride: Self::default_stride(),
        }
    }
}

pub fn default_sweep() -> SweepSpec {
    SweepSpec::default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiguresBlock {
    /// Panel ids to produce; all panels when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panels: Option<Vec<String>>,
    #[serde(default = "FiguresBlock::default_steps")]
    pub steps: usize,
    /// Output directory; `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl FiguresBlock {
    fn default_steps() -> usize {
        201
    }
}

impl Default for FiguresBlock {
    fn default() -> Self {
        FiguresBlock { panels: None, steps: Self::default_steps(), out: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    #[serde(default = "VerifyBlock::default_seed")]
    pub seed: u64,
    /// Random states for the nonnegativity check.
    #[serde(default = "VerifyBlock::default_random_cases")]
    pub random_cases: usize,
    /// Random states for the permutation-oracle check.
    #[serde(default = "VerifyBlock::default_oracle_cases")]
    pub oracle_cases: usize,
    #[serde(default = "VerifyBlock::default_trace_tolerance")]
    pub trace_tolerance: f64,
    #[serde(default = "VerifyBlock::default_ergotropy_tolerance")]
    pub ergotropy_tolerance: f64,
    #[serde(default = "VerifyBlock::default_steady_tolerance")]
    pub steady_tolerance: f64,
}

impl VerifyBlock {
    fn default_seed() -> u64 {
        2024
    }
    fn default_random_cases() -> usize {
        1000
    }
    fn default_oracle_cases() -> usize {
        200
    }
    fn default_trace_tolerance() -> f64 {
        1e-9
    }
    fn default_ergotropy_tolerance() -> f64 {
        1e-12
    }
    fn default_steady_tolerance() -> f64 {
        1e-6
    }
}

impl Default for VerifyBlock {
    fn default() -> Self {
        VerifyBlock {
            seed: Self::default_seed(),
            random_cases: Self::default_random_cases(),
            oracle_cases: Self::default_oracle_cases(),
            trace_tolerance: Self::default_trace_tolerance(),
            ergotropy_tolerance: Self::default_ergotropy_tolerance(),
            steady_tolerance: Self::default_steady_tolerance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub params: EngineParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolveBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figures: Option<FiguresBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
    /// Provenance written by the tool itself; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<Value>,
}

impl RunConfig {
    pub fn new(params: EngineParams) -> Self {
        RunConfig { params, evolve: None, sweep: None, figures: None, verify: None, manifest: None }
    }

    /// Rejects blocks belonging to other commands and fills in the one for
    /// `command` with defaults when absent.
    pub fn for_command(mut self, command: Command) -> Result<Self> {
        let present = [
            (Command::Evolve, self.evolve.is_some()),
            (Command::Sweep, self.sweep.is_some()),
            (Command::Figures, self.figures.is_some()),
            (Command::Verify, self.verify.is_some()),
        ];
        for (c, there) in present {
            if there && c != command {
                return Err(Error::Config(format!(
                    "configuration has a `{}` block but the command is `{}`",
                    c.name(),
                    command.name()
                )));
            }
        }
        match command {
            Command::Steady => {}
            Command::Evolve => {
                self.evolve.get_or_insert_with(EvolveBlock::default);
            }
            Command::Sweep => {
                self.sweep.get_or_insert_with(default_sweep);
            }
            Command::Figures => {
                self.figures.get_or_insert_with(FiguresBlock::default);
            }
            Command::Verify => {
                self.verify.get_or_insert_with(VerifyBlock::default);
            }
        }
        Ok(self)
    }
}

/// Sets `value` at a dotted `path` in a JSON object, creating objects on the way.
/// The value is read as JSON when it parses, otherwise as a string.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{assignment}` is not of the form key=value")))?;
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(Error::Config(format!("override path `{path}` has an empty component")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    for key in &keys[..keys.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override path `{path}` crosses a non-object")))?;
        node = obj.entry(key.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    node.as_object_mut()
        .ok_or_else(|| Error::Config(format!("override path `{path}` crosses a non-object")))?
        .insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

/// Reads the config file (or starts empty), applies overrides in order and the
/// generator variant flag, then decodes.
pub fn load_config(path: Option<&Path>, overrides: &[String], variant: Option<GeneratorVariant>) -> Result<RunConfig> {
    let mut doc = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            serde_json::from_str::<Value>(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(Map::new()),
    };
    if !doc.is_object() {
        return Err(Error::Config("configuration must be a JSON object".into()));
    }
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    if let Some(v) = variant {
        apply_override(&mut doc, &format!("params.generator_variant=\"{}\"", v.as_str()))?;
    }
    serde_json::from_value(doc).map_err(|e| Error::Config(e.to_string()))
}
