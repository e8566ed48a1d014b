//! Configuration, file formats and the command implementations.

mod commands;
mod config;
mod figures;
mod files;
mod svg;
mod tables;
mod verify;

pub use commands::{
    cmd_evolve, cmd_figures, cmd_steady, cmd_sweep, cmd_verify, error_json, error_status, run, Outcome, Status,
    DEFAULT_OUT, STABILITY_LIMIT,
};
pub use config::{
    apply_override, default_sweep, load_config, Command, EvolveBlock, FiguresBlock, RunConfig, VerifyBlock,
};
pub use figures::{build_figures, panel, panel_manifest, FigureIndex, Panel, PanelStatus, PANELS};
pub use files::{fmt_f64, fmt_opt, write_atomic};
pub use svg::{LineChart, Series};
pub use tables::{stacked_sweep_csv, sweep_csv, trajectory_csv, SWEEP_HEADER, TRAJECTORY_HEADER};
pub use verify::{
    brute_force_ergotropy, random_energies, random_engine, random_state, run_verify, SuiteResult, VerifyReport,
};
