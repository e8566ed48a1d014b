use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("integration diverged at t = {time}: |component| exceeded {limit}")]
    IntegrationDiverged { time: f64, limit: f64 },

    #[error("no unique steady state: {0}")]
    NoUniqueSteadyState(String),

    #[error("singular inversion bounds: {0}")]
    SingularBound(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// True for failures of the numerics (as opposed to bad input or I/O).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::IntegrationDiverged { .. }
                | Error::NoUniqueSteadyState(_)
                | Error::SingularBound(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
