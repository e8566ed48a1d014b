use nalgebra::{SMatrix, SVector};

use crate::error::Result;

use super::params::{EngineParams, GeneratorVariant};
use super::thermal::occupations;

pub type Matrix5 = SMatrix<f64, 5, 5>;
pub type Vector5 = SVector<f64, 5>;

/// Basis order of the state vector and of the generator rows/columns.
pub const BASIS: [&str; 5] = ["rho11", "rho22", "rhoaa", "rhobb", "rho12"];

/// Dense 5×5 generator of `d|rho>/dt = L |rho>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub matrix: Matrix5,
    pub variant: GeneratorVariant,
}

impl Generator {
    /// Sum of the population rows (1–4) in each column. Zero for a
    /// probability-conserving generator.
    pub fn population_column_sums(&self) -> [f64; 5] {
        let mut sums = [0.0; 5];
        for (j, s) in sums.iter_mut().enumerate() {
            *s = (0..4).map(|i| self.matrix[(i, j)]).sum();
        }
        sums
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.matrix.row_iter().map(|row| row.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `dt * ||L||_inf`; fixed-step integration is considered unsafe above 0.1.
    pub fn stability_ratio(&self, dt: f64) -> f64 {
        dt * self.norm_inf()
    }

    pub fn apply(&self, v: &Vector5) -> Vector5 {
        self.matrix * v
    }
}

pub fn build_generator(params: &EngineParams) -> Result<Generator> {
    build_generator_variant(params, params.variant)
}

pub fn build_generator_variant(params: &EngineParams, variant: GeneratorVariant) -> Result<Generator> {
    let o = occupations(params)?;
    let (g2, r) = (params.g * params.g, params.r);
    let (p_c, p_h) = (params.p_c, params.p_h);

    // absorption 1,2 -> b
    let up_c = match variant {
        GeneratorVariant::TraceConserving => r * o.n_c,
        GeneratorVariant::Verbatim => r * o.n_tilde_c,
    };

    #[rustfmt::skip]
    let matrix = Matrix5::from_row_slice(&[
        -r * o.n,         0.0,              r * o.n_tilde_h,                     r * o.n_tilde_c,                    -r * o.y,
        0.0,              -r * o.n,         r * o.n_tilde_h,                     r * o.n_tilde_c,                    -r * o.y,
        r * o.n_h,        r * o.n_h,        -(g2 * o.n_tilde_ell + 2.0 * r * o.n_tilde_h), g2 * o.n_ell,            2.0 * r * p_h * o.n_h,
        up_c,             up_c,             g2 * o.n_tilde_ell,                  -(g2 * o.n_ell + 2.0 * r * o.n_tilde_c), 2.0 * r * p_c * o.n_c,
        -r * o.y / 2.0,   -r * o.y / 2.0,   r * p_h * o.n_tilde_h,               r * p_c * o.n_tilde_c,              -r * o.n,
    ]);
    Ok(Generator { matrix, variant })
}
