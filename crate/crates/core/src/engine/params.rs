//! Physical inputs of the engine and their flat JSON form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which form of the 5×5 generator to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorVariant {
    /// Absorption 1→b carries `n_c`, so population rows sum to zero in every column.
    #[default]
    TraceConserving,
    /// Literal matrix with `ñ_c` in the ρbb row for columns 1–2; does not conserve trace.
    Verbatim,
}

impl GeneratorVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorVariant::TraceConserving => "trace_conserving",
            GeneratorVariant::Verbatim => "verbatim",
        }
    }
}

impl std::str::FromStr for GeneratorVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace_conserving" => Ok(GeneratorVariant::TraceConserving),
            "verbatim" => Ok(GeneratorVariant::Verbatim),
            other => Err(Error::Config(format!(
                "unknown generator variant `{other}` (expected trace_conserving or verbatim)"
            ))),
        }
    }
}

/// How the two thermal baths are specified.
///
/// `Occupations` injects the Bose–Einstein factors directly, which is how the
/// analytic limits (dilute baths, `n_c ≪ n_h`) are probed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BathSpec {
    Temperatures { t_c: f64, t_h: f64 },
    Occupations { n_c: f64, n_h: f64 },
}

/// Cavity occupation, either given directly or through a cavity temperature
/// evaluated at the lasing energy `eps_a - eps_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CavitySpec {
    Occupation(f64),
    Temperature(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRecord", into = "ParamsRecord")]
pub struct EngineParams {
    pub eps1: f64,
    pub eps2: f64,
    pub eps_b: f64,
    pub eps_a: f64,
    /// Cavity coupling.
    pub g: f64,
    /// Bath coupling.
    pub r: f64,
    pub baths: BathSpec,
    pub cavity: CavitySpec,
    pub p_c: f64,
    pub p_h: f64,
    pub variant: GeneratorVariant,
}

impl Default for EngineParams {
    /// Level scheme, couplings and temperatures of the reference engine
    /// (`eps = 0.1, 0.1, 0.4, 1.5`, `g = r = 1`, `T_c = 0.5`, `T_h = 2`),
    /// an empty cavity, and `p_c = 0.1`, `p_h = 0.5`.
    fn default() -> Self {
        EngineParams {
            eps1: 0.1,
            eps2: 0.1,
            eps_b: 0.4,
            eps_a: 1.5,
            g: 1.0,
            r: 1.0,
            baths: BathSpec::Temperatures { t_c: 0.5, t_h: 2.0 },
            cavity: CavitySpec::Occupation(0.0),
            p_c: 0.1,
            p_h: 0.5,
            variant: GeneratorVariant::TraceConserving,
        }
    }
}

impl EngineParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        let finite = [self.eps1, self.eps2, self.eps_b, self.eps_a, self.g, self.r, self.p_c, self.p_h]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return bad("all parameters must be finite".into());
        }
        for (name, p) in [("p_c", self.p_c), ("p_h", self.p_h)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} outside [0, 1]"));
            }
        }
        if (self.eps1 - self.eps2).abs() > 1e-12 {
            return bad(format!("eps1 = {} and eps2 = {} must be degenerate", self.eps1, self.eps2));
        }
        if !(self.eps1 < self.eps_b && self.eps_b < self.eps_a) {
            return bad(format!(
                "levels must be ordered eps1 < eps_b < eps_a (got {}, {}, {})",
                self.eps1, self.eps_b, self.eps_a
            ));
        }
        if self.g <= 0.0 || self.r <= 0.0 {
            return bad(format!("g = {} and r = {} must be positive", self.g, self.r));
        }
        match self.baths {
            BathSpec::Temperatures { t_c, t_h } => {
                if !(t_c > 0.0 && t_h > 0.0 && t_c.is_finite() && t_h.is_finite()) {
                    return bad(format!("T_c = {t_c} and T_h = {t_h} must be positive"));
                }
            }
            BathSpec::Occupations { n_c, n_h } => {
                if !(n_c >= 0.0 && n_h >= 0.0 && n_c.is_finite() && n_h.is_finite()) {
                    return bad(format!("n_c = {n_c} and n_h = {n_h} must be non-negative"));
                }
            }
        }
        match self.cavity {
            CavitySpec::Occupation(n) if !(n >= 0.0 && n.is_finite()) => {
                bad(format!("n_ell = {n} must be non-negative"))
            }
            CavitySpec::Temperature(t) if !(t > 0.0 && t.is_finite()) => bad(format!("T_ell = {t} must be positive")),
            _ => Ok(()),
        }
    }

    /// Same engine with both coherence parameters switched off.
    pub fn incoherent(&self) -> Self {
        EngineParams { p_c: 0.0, p_h: 0.0, ..self.clone() }
    }

    pub fn with_occupations(&self, n_c: f64, n_h: f64) -> Self {
        EngineParams { baths: BathSpec::Occupations { n_c, n_h }, ..self.clone() }
    }

    /// Ascending diagonal of the bare Hamiltonian, `(eps1, eps2, eps_b, eps_a)`.
    pub fn energies(&self) -> [f64; 4] {
        [self.eps1, self.eps2, self.eps_b, self.eps_a]
    }

    pub fn hot_gap(&self) -> f64 {
        self.eps_a - self.eps1
    }

    pub fn cold_gap(&self) -> f64 {
        self.eps_b - self.eps1
    }

    pub fn lasing_gap(&self) -> f64 {
        self.eps_a - self.eps_b
    }
}

/// Flat JSON record. Cold/hot baths are given either as `T_c`/`T_h` or as
/// injected occupations `n_c`/`n_h`; the cavity as `n_ell` or `T_ell`.
/// Missing keys take the reference-engine defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsRecord {
    #[serde(default)]
    eps1: Option<f64>,
    #[serde(default)]
    eps2: Option<f64>,
    #[serde(default)]
    eps_b: Option<f64>,
    #[serde(default)]
    eps_a: Option<f64>,
    #[serde(default)]
    g: Option<f64>,
    #[serde(default)]
    r: Option<f64>,
    #[serde(rename = "T_c", default, skip_serializing_if = "Option::is_none")]
    t_c: Option<f64>,
    #[serde(rename = "T_h", default, skip_serializing_if = "Option::is_none")]
    t_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_ell: Option<f64>,
    #[serde(rename = "T_ell", default, skip_serializing_if = "Option::is_none")]
    t_ell: Option<f64>,
    #[serde(default)]
    p_c: Option<f64>,
    #[serde(default)]
    p_h: Option<f64>,
    #[serde(default)]
    generator_variant: Option<GeneratorVariant>,
}

impl TryFrom<ParamsRecord> for EngineParams {
    type Error = Error;

    fn try_from(rec: ParamsRecord) -> Result<Self> {
        let d = EngineParams::default();
        let eps1 = rec.eps1.unwrap_or(d.eps1);
        let baths = match (rec.t_c, rec.t_h, rec.n_c, rec.n_h) {
            (None, None, None, None) => d.baths,
            (t_c, t_h, None, None) => BathSpec::Temperatures { t_c: t_c.unwrap_or(0.5), t_h: t_h.unwrap_or(2.0) },
            (None, None, Some(n_c), Some(n_h)) => BathSpec::Occupations { n_c, n_h },
            _ => return Err(Error::InvalidParams("give either T_c/T_h or both n_c and n_h, not a mixture".into())),
        };
        let cavity = match (rec.n_ell, rec.t_ell) {
            (Some(_), Some(_)) => return Err(Error::InvalidParams("give either n_ell or T_ell, not both".into())),
            (Some(n), None) => CavitySpec::Occupation(n),
            (None, Some(t)) => CavitySpec::Temperature(t),
            (None, None) => d.cavity,
        };
        let params = EngineParams {
            eps1,
            eps2: rec.eps2.unwrap_or(eps1),
            eps_b: rec.eps_b.unwrap_or(d.eps_b),
            eps_a: rec.eps_a.unwrap_or(d.eps_a),
            g: rec.g.unwrap_or(d.g),
            r: rec.r.unwrap_or(d.r),
            baths,
            cavity,
            p_c: rec.p_c.unwrap_or(d.p_c),
            p_h: rec.p_h.unwrap_or(d.p_h),
            variant: rec.generator_variant.unwrap_or_default(),
        };
        params.validate()?;
        Ok(params)
    }
}

impl From<EngineParams> for ParamsRecord {
    fn from(p: EngineParams) -> Self {
        let (t_c, t_h, n_c, n_h) = match p.baths {
            BathSpec::Temperatures { t_c, t_h } => (Some(t_c), Some(t_h), None, None),
            BathSpec::Occupations { n_c, n_h } => (None, None, Some(n_c), Some(n_h)),
        };
        let (n_ell, t_ell) = match p.cavity {
            CavitySpec::Occupation(n) => (Some(n), None),
            CavitySpec::Temperature(t) => (None, Some(t)),
        };
        ParamsRecord {
            eps1: Some(p.eps1),
            eps2: Some(p.eps2),
            eps_b: Some(p.eps_b),
            eps_a: Some(p.eps_a),
            g: Some(p.g),
            r: Some(p.r),
            t_c,
            t_h,
            n_c,
            n_h,
            n_ell,
            t_ell,
            p_c: Some(p.p_c),
            p_h: Some(p.p_h),
            generator_variant: Some(p.variant),
        }
    }
}
