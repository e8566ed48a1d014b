//! Closed-form conditions: the bath-ratio window for population inversion of
//! the lasing pair, and the hot-coherence threshold beyond which the lower
//! quasiprobability turns negative.

use serde::Serialize;

use crate::engine::{occupations, EngineParams};
use crate::error::{Error, Result};

/// Window `x_minus <= n_c/n_h <= x_plus` for `rhoaa > rhobb`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversionBounds {
    /// `None` when the roots are complex.
    pub x_minus: Option<f64>,
    pub x_plus: Option<f64>,
    pub b_term: f64,
    /// `(g² - 2r)(1 + p_h²) / ((g² + 2r)(1 + p_c²))`, the constant term of the quadratic.
    pub product: f64,
    pub discriminant: f64,
    pub real: bool,
}

impl InversionBounds {
    /// `x² - 2Bx + C` at `x`.
    pub fn quadratic(&self, x: f64) -> f64 {
        x * x - 2.0 * self.b_term * x + self.product
    }
}

pub fn inversion_bounds(params: &EngineParams) -> Result<InversionBounds> {
    let (g2, r) = (params.g * params.g, params.r);
    let (p_c, p_h) = (params.p_c, params.p_h);
    let denom = (g2 + 2.0 * r) * (1.0 - p_c * p_c);
    if denom.abs() < 1e-15 {
        return Err(Error::SingularBound(format!("p_c = {p_c} makes 1 - p_c² vanish")));
    }
    let b_term = (g2 * (1.0 - p_c * p_h) - r * (p_h * p_h - p_c * p_c)) / denom;
    let product = (g2 - 2.0 * r) * (1.0 + p_h * p_h) / ((g2 + 2.0 * r) * (1.0 + p_c * p_c));
    let discriminant = b_term * b_term - product;
    let real = discriminant >= 0.0;
    let (x_minus, x_plus) = if real {
        let s = discriminant.sqrt();
        (Some(b_term - s), Some(b_term + s))
    } else {
        (None, None)
    };
    Ok(InversionBounds { x_minus, x_plus, b_term, product, discriminant, real })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiprobThreshold {
    pub n1: f64,
    /// `p_h` above which `rho_minus < 0`, per the closed form.
    pub p_h0: f64,
    /// True when evaluated outside `n_c ≪ n_h`, `g = r = 1`.
    pub advisory: bool,
}

/// Ratio `n_c / n_h` below which the threshold formula counts as in-regime.
pub const DILUTE_COLD_RATIO: f64 = 1e-2;

pub fn negative_quasiprob_threshold(params: &EngineParams) -> Result<QuasiprobThreshold> {
    let o = occupations(params)?;
    let (n_h, n_l, p_c) = (o.n_h, o.n_ell, params.p_c);
    let nt_l = o.n_tilde_ell;
    let n1 = 8.0 * n_h * n_h * (n_l + 2.0).powi(2)
        + 8.0 * n_h * (n_l + 2.0) * (3.0 * n_l + 5.0)
        + 17.0 * n_l * n_l
        + (n_l + 1.0).powi(2) * p_c * p_c
        + 2.0 * nt_l * nt_l * p_c
        + 58.0 * n_l
        + 49.0;
    let p_h0 =
        (n1.sqrt() - (2.0 * n_h * (n_l + 2.0) + n_l * (p_c + 3.0) + p_c + 5.0)) / (2.0 * o.n_tilde_h * (n_l + 2.0));
    let in_regime = params.g == 1.0 && params.r == 1.0 && o.n_c <= DILUTE_COLD_RATIO * o.n_h;
    Ok(QuasiprobThreshold { n1, p_h0, advisory: !in_regime })
}
