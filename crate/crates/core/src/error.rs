use thiserror::Error;

/// Errors raised by the forecasting library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model or configuration parameter lies outside its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// GARCH coefficients violate second-order stationarity.
    #[error("non-stationary GARCH coefficients: sum of weights {persistence} must be < 1")]
    NonStationary { persistence: f64 },

    /// Not enough observations for the requested window/horizon.
    #[error("insufficient data: {what} needs {needed} observations, got {available}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        available: usize,
    },

    /// An index (lag, horizon) lies outside the supported range.
    #[error("{what} {value} out of range (max {max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    /// The innovations recursion produced a non-positive mean squared error.
    #[error("autocovariance table is numerically degenerate: v[{step}] = {mse:e}")]
    Degenerate { step: usize, mse: f64 },

    /// An input series contains NaN or infinite values.
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
