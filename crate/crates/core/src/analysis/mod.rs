//! Thermodynamic observables, closed-form bounds, parameter sweeps and the
//! numerical oracles that check them.

mod bounds;
mod observables;
mod optimize;
mod oracle;
pub mod search;
mod sweep;

pub use bounds::{
    inversion_bounds, negative_quasiprob_threshold, InversionBounds, QuasiprobThreshold, DILUTE_COLD_RATIO,
};
pub use observables::{flux, power, work};
pub use optimize::{optimize, Metric, Optimum, ARGMAX_TOLERANCE, FLAT_RANGE};
pub use oracle::{
    inversion_margin, inversion_oracle, linspace, lower_quasiprobability, quasiprob_sign_oracle, COHERENCE_TOLERANCE,
    DILUTE_SCALE, RATIO_TOLERANCE,
};
pub use sweep::{
    detect_crossovers, detect_crossovers_with, evaluate_point, sweep, sweep_with, Crossover, CrossoverSet, RowData,
    Sweep, SweepRow, SweepSpec, SweepVariable, CROSSOVER_TOLERANCE,
};
