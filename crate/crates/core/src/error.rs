use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("noise standard deviation must be positive and finite, got {0}")]
    InvalidSigma(f64),

    #[error("observation trace is empty")]
    EmptyTrace,

    #[error("decoding delay k0 = {k0} exceeds sequence length {len}")]
    DelayTooLarge { k0: usize, len: usize },

    #[error("exhaustive oracle limited to {max} bits, got {len}")]
    OracleScale { len: usize, max: usize },

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("unknown decoder `{0}`")]
    UnknownDecoder(String),

    #[error("invariant vector truncated too early: tail ratio {ratio:e} at d_max = {d_max}")]
    Truncation { d_max: usize, ratio: f64 },

    #[error("kernel discretization lost {deficit:e} of row mass at cell {row}")]
    Discretization { row: usize, deficit: f64 },

    #[error("power iteration did not converge in {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerical analysis rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. } | Error::Discretization { .. } | Error::NonConvergence { .. }
        )
    }
}
