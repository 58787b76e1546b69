//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Nested quadrature hit the bisection cap before the tail estimates
    /// agreed. Carries the magnitude of the last whole-tail estimate and the
    /// gap between it and the sum of its two halves.
    #[error("quadrature did not converge after {bisections} bisections \
             (gap {gap:.3e}, last estimate magnitude {estimate:.6e})")]
    QuadratureDivergence {
        bisections: usize,
        gap: f64,
        estimate: f64,
    },

    #[error("singular evaluation: {0}")]
    SingularEvaluation(String),

    #[error("rank-deficient system: |R[{index},{index}]| = {value:.3e} \
             below threshold {threshold:.3e}")]
    RankDeficient {
        index: usize,
        value: f64,
        threshold: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization failure: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
