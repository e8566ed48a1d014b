//! Brute-force locators built on the numerically solved steady state. These
//! are the ground truth against which the closed-form conditions are judged.

use crate::dynamics::steady_state;
use crate::engine::{build_generator, EngineParams};
use crate::ergotropy::quasiprobabilities;
use crate::par::{self, Execution};

use super::search::bisect_sign;

/// Bisection tolerance on the bath ratio `n_c / n_h`.
pub const RATIO_TOLERANCE: f64 = 1e-8;
/// Bisection tolerance on `p_h`.
pub const COHERENCE_TOLERANCE: f64 = 1e-6;
/// Default hot occupation for the dilute-bath inversion check.
pub const DILUTE_SCALE: f64 = 0.01;

/// `rhoaa - rhobb` of the steady state with `n_h = scale`, `n_c = ratio * scale`.
pub fn inversion_margin(params: &EngineParams, ratio: f64, scale: f64) -> f64 {
    let p = params.with_occupations(ratio * scale, scale);
    build_generator(&p).and_then(|g| steady_state(&g)).map(|s| s.rhoaa - s.rhobb).unwrap_or(f64::NAN)
}

/// Lower quasiprobability of the steady state at hot coherence `p_h`.
pub fn lower_quasiprobability(params: &EngineParams, p_h: f64) -> f64 {
    let p = EngineParams { p_h, ..params.clone() };
    build_generator(&p).and_then(|g| steady_state(&g)).map(|s| quasiprobabilities(&s).1).unwrap_or(f64::NAN)
}

fn sign_changes<F>(grid: &[f64], values: &[f64], tol: f64, f: F) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let cells: Vec<(f64, f64)> = grid
        .windows(2)
        .zip(values.windows(2))
        .filter(|(_, v)| v[0].is_finite() && v[1].is_finite() && (v[0] > 0.0) != (v[1] > 0.0))
        .map(|(x, _)| (x[0], x[1]))
        .collect();
    par::map(Execution::default(), &cells, |&(lo, hi)| bisect_sign(lo, hi, tol, &f))
}

/// Bath ratios at which the lasing pair changes between inverted and not,
/// refined to [`RATIO_TOLERANCE`]. `ratio_grid` must be ascending.
pub fn inversion_oracle(params: &EngineParams, ratio_grid: &[f64], scale: f64) -> Vec<f64> {
    let values = par::map(Execution::default(), ratio_grid, |&x| inversion_margin(params, x, scale));
    sign_changes(ratio_grid, &values, RATIO_TOLERANCE, |x| inversion_margin(params, x, scale))
}

/// Values of `p_h` where the steady-state lower quasiprobability changes sign.
pub fn quasiprob_sign_oracle(params: &EngineParams, p_h_grid: &[f64]) -> Vec<f64> {
    let values = par::map(Execution::default(), p_h_grid, |&x| lower_quasiprobability(params, x));
    sign_changes(p_h_grid, &values, COHERENCE_TOLERANCE, |x| lower_quasiprobability(params, x))
}

pub fn linspace(from: f64, to: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n).map(|i| if i + 1 == n { to } else { from + (to - from) * i as f64 / (n - 1) as f64 }).collect()
}
