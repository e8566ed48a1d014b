use crate::dynamics::StateVector;
use crate::engine::{cold_temperature, occupations, EngineParams};
use crate::error::{Error, Result};

/// Photon flux into the cavity mode, `g² (ñ_ell rhoaa - n_ell rhobb)`.
pub fn flux(params: &EngineParams, state: &StateVector) -> Result<f64> {
    let o = occupations(params)?;
    Ok(params.g * params.g * (o.n_tilde_ell * state.rhoaa - o.n_ell * state.rhobb))
}

/// Work per photon, `(eps_a - eps_b) - T_c ln(rhoaa / rhobb)`.
pub fn work(params: &EngineParams, state: &StateVector) -> Result<f64> {
    if !(state.rhoaa > 0.0 && state.rhobb > 0.0) {
        return Err(Error::Domain(format!(
            "work needs positive upper populations (rhoaa = {}, rhobb = {})",
            state.rhoaa, state.rhobb
        )));
    }
    let t_c = cold_temperature(params)?;
    Ok(params.lasing_gap() - t_c * (state.rhoaa / state.rhobb).ln())
}

pub fn power(params: &EngineParams, state: &StateVector) -> Result<f64> {
    Ok(flux(params, state)? * work(params, state)?)
}
