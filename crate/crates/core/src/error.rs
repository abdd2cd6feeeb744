use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spring spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("equilibrium solver did not converge after {iterations} iterations (residual {residual:.3e} N*m)")]
    SolverFailure { iterations: usize, residual: f64 },

    #[error("time went backwards: {previous} s followed by {current} s")]
    TimeRegression { previous: f64, current: f64 },

    #[error("bend level {0} outside [0, 1]")]
    InvalidLevel(f64),

    #[error("calibration fit failed: {0}")]
    FitFailure(String),

    #[error("environment generation failed after {attempts} attempts")]
    Infeasible { attempts: u32 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),

    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// I/O error tagged with the file it concerns.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
