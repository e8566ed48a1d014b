//! Time evolution and steady state of `d|rho>/dt = L |rho>`.

use nalgebra::RowSVector;
use serde::{Deserialize, Serialize};

use crate::engine::{Generator, Matrix5, Vector5};
use crate::error::{Error, Result};

/// `|rho> = (rho11, rho22, rhoaa, rhobb, rho12)`, with `rho12` the real part
/// of the ground-doublet coherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub rho11: f64,
    pub rho22: f64,
    pub rhoaa: f64,
    pub rhobb: f64,
    pub rho12: f64,
}

impl Default for StateVector {
    /// Ground doublet equally populated, no coherence.
    fn default() -> Self {
        StateVector::new(0.5, 0.5, 0.0, 0.0, 0.0)
    }
}

impl StateVector {
    pub const fn new(rho11: f64, rho22: f64, rhoaa: f64, rhobb: f64, rho12: f64) -> Self {
        StateVector { rho11, rho22, rhoaa, rhobb, rho12 }
    }

    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho22 + self.rhoaa + self.rhobb
    }

    pub fn to_vector(&self) -> Vector5 {
        Vector5::new(self.rho11, self.rho22, self.rhoaa, self.rhobb, self.rho12)
    }

    pub fn from_vector(v: &Vector5) -> Self {
        StateVector::new(v[0], v[1], v[2], v[3], v[4])
    }

    pub fn sup_distance(&self, other: &StateVector) -> f64 {
        (self.to_vector() - other.to_vector()).amax()
    }

    /// Checks the trace, population and coherence-magnitude invariants.
    pub fn validate(&self) -> Result<()> {
        let v = self.to_vector();
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("state has non-finite components".into()));
        }
        if (self.trace() - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("state trace {} is not 1", self.trace())));
        }
        if v.iter().take(4).any(|&x| x < -1e-12) {
            return Err(Error::Domain("state has a negative population".into()));
        }
        if self.rho12.abs() > 0.5 + 1e-12 || self.rho12.abs() > self.rho11 + self.rho22 + 1e-12 {
            return Err(Error::Domain(format!("coherence {} too large", self.rho12)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
}

impl Trajectory {
    pub fn last(&self) -> Option<(f64, &StateVector)> {
        Some((*self.times.last()?, self.states.last()?))
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveOptions {
    pub t_max: f64,
    pub dt: f64,
    /// Record every `stride`-th step (the initial and final states are always kept).
    #[serde(default = "default_stride")]
    pub stride: usize,
}

fn default_stride() -> usize {
    1
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { t_max: 50.0, dt: 1e-3, stride: 1 }
    }
}

/// Components beyond this magnitude mean the integration has blown up.
pub const DIVERGENCE_LIMIT: f64 = 10.0;

/// Fixed-step classical RK4 on the linear system.
pub fn evolve(gen: &Generator, init: &StateVector, opts: &EvolveOptions) -> Result<Trajectory> {
    let EvolveOptions { t_max, dt, stride } = *opts;
    if !(dt > 0.0) || !(t_max >= dt) || stride == 0 {
        return Err(Error::Domain(format!(
            "evolve needs dt > 0, t_max >= dt and stride >= 1 (dt = {dt}, t_max = {t_max}, stride = {stride})"
        )));
    }
    init.validate()?;

    let steps = (t_max / dt).round() as usize;
    let l = &gen.matrix;
    let mut x = init.to_vector();
    let mut times = Vec::with_capacity(steps / stride + 2);
    let mut states = Vec::with_capacity(steps / stride + 2);
    times.push(0.0);
    states.push(*init);

    for k in 1..=steps {
        x = rk4_step(l, &x, dt);
        if x.iter().any(|v| !(v.abs() <= DIVERGENCE_LIMIT)) {
            return Err(Error::IntegrationDiverged { time: k as f64 * dt, limit: DIVERGENCE_LIMIT });
        }
        if k % stride == 0 || k == steps {
            times.push(k as f64 * dt);
            states.push(StateVector::from_vector(&x));
        }
    }
    Ok(Trajectory { times, states })
}

fn rk4_step(l: &Matrix5, x: &Vector5, dt: f64) -> Vector5 {
    let k1 = l * x;
    let k2 = l * (x + k1 * (dt / 2.0));
    let k3 = l * (x + k2 * (dt / 2.0));
    let k4 = l * (x + k3 * dt);
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

/// Largest acceptable condition estimate of the row-replaced system.
pub const MAX_CONDITION: f64 = 1e12;
/// Relative residual above which the generator is deemed to have no kernel.
pub const KERNEL_TOLERANCE: f64 = 1e-9;

/// Steady state with the trace row replacing population row 0.
pub fn steady_state(gen: &Generator) -> Result<StateVector> {
    steady_state_replacing(gen, 0)
}

/// Steady state from the linear system in which population row `row` (0–3)
/// of `L` is replaced by the trace constraint `(1, 1, 1, 1, 0) · rho = 1`.
pub fn steady_state_replacing(gen: &Generator, row: usize) -> Result<StateVector> {
    if row >= 4 {
        return Err(Error::Domain(format!("replaced row {row} is not a population row")));
    }
    let mut a = gen.matrix;
    a.set_row(row, &RowSVector::<f64, 5>::from_row_slice(&[1.0, 1.0, 1.0, 1.0, 0.0]));
    let mut b = Vector5::zeros();
    b[row] = 1.0;

    let lu = a.lu();
    let inv = lu.try_inverse().ok_or_else(|| Error::NoUniqueSteadyState("row-replaced system is singular".into()))?;
    let cond = norm_inf(&a) * norm_inf(&inv);
    if !(cond <= MAX_CONDITION) {
        return Err(Error::NoUniqueSteadyState(format!(
            "row-replaced system is ill-conditioned (condition estimate {cond:.3e})"
        )));
    }
    let x = inv * b;
    let state = StateVector::from_vector(&x);

    let scale = gen.norm_inf();
    let res = residual(gen, &state);
    if res > KERNEL_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NoUniqueSteadyState(format!(
            "generator has no stationary state on the trace-1 plane (residual {res:.3e}, ||L|| = {scale:.3e})"
        )));
    }
    Ok(state)
}

/// `||L · state||_inf`
pub fn residual(gen: &Generator, state: &StateVector) -> f64 {
    gen.apply(&state.to_vector()).amax()
}

fn norm_inf(m: &Matrix5) -> f64 {
    m.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}
