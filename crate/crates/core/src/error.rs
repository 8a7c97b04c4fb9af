use thiserror::Error;

/// Failures raised by the generic numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("quadrature did not converge: estimate {estimate:e}, error estimate {error:e} after {panels} panels")]
    Quadrature {
        estimate: f64,
        error: f64,
        panels: usize,
    },
    #[error("series summation failed after {terms} terms: {reason}")]
    Summation { terms: usize, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Top-level error type for physics operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("carrier table queried at T = {temperature} K outside [{min}, {max}] K")]
    Extrapolation {
        temperature: f64,
        min: f64,
        max: f64,
    },
    #[error("Matsubara term l = {index}: {source}")]
    Term {
        index: u64,
        #[source]
        source: NumericsError,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Whether the failure came from quadrature or series convergence.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerics(NumericsError::Quadrature { .. } | NumericsError::Summation { .. })
                | Error::Term {
                    source: NumericsError::Quadrature { .. } | NumericsError::Summation { .. },
                    ..
                }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
