use crate::error::{Error, Result};

use super::params::{BathSpec, CavitySpec, EngineParams};

/// Bose–Einstein occupation `1 / (exp(E/T) - 1)`.
pub fn bose_einstein(energy: f64, temperature: f64) -> Result<f64> {
    if !(energy > 0.0) || !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "Bose-Einstein factor needs E > 0 and T > 0 (got E = {energy}, T = {temperature})"
        )));
    }
    // exp_m1 keeps precision when E/T is small; large E/T underflows to 0.
    Ok(1.0 / (energy / temperature).exp_m1())
}

/// Temperature at which a mode of the given energy has occupation `n`.
pub fn temperature_for_occupation(energy: f64, n: f64) -> Result<f64> {
    if !(energy > 0.0) || !(n > 0.0) {
        return Err(Error::Domain(format!("effective temperature needs E > 0 and n > 0 (got E = {energy}, n = {n})")));
    }
    Ok(energy / (1.0 / n).ln_1p())
}

/// Coherence parameter `sqrt(|cos phi|)` for dipole angle `phi`.
pub fn coherence_param_from_angle(phi: f64) -> f64 {
    phi.cos().abs().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupations {
    pub n_h: f64,
    pub n_c: f64,
    pub n_ell: f64,
    pub n_tilde_h: f64,
    pub n_tilde_c: f64,
    pub n_tilde_ell: f64,
    /// `n_c + n_h`
    pub n: f64,
    /// `n_c p_c + n_h p_h`
    pub y: f64,
}

pub fn occupations(params: &EngineParams) -> Result<Occupations> {
    let (n_c, n_h) = match params.baths {
        BathSpec::Temperatures { t_c, t_h } => {
            (bose_einstein(params.cold_gap(), t_c)?, bose_einstein(params.hot_gap(), t_h)?)
        }
        BathSpec::Occupations { n_c, n_h } => (n_c, n_h),
    };
    let n_ell = match params.cavity {
        CavitySpec::Occupation(n) => n,
        CavitySpec::Temperature(t) => bose_einstein(params.lasing_gap(), t)?,
    };
    Ok(Occupations {
        n_h,
        n_c,
        n_ell,
        n_tilde_h: 1.0 + n_h,
        n_tilde_c: 1.0 + n_c,
        n_tilde_ell: 1.0 + n_ell,
        n: n_c + n_h,
        y: n_c * params.p_c + n_h * params.p_h,
    })
}

/// Cold-bath temperature entering the work `W`. With injected occupations
/// this is the temperature reproducing `n_c` at the cold transition.
pub fn cold_temperature(params: &EngineParams) -> Result<f64> {
    match params.baths {
        BathSpec::Temperatures { t_c, .. } => Ok(t_c),
        BathSpec::Occupations { n_c, .. } => temperature_for_occupation(params.cold_gap(), n_c),
    }
}
