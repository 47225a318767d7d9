use thiserror::Error;

/// Errors produced anywhere in the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric or structural parameter is outside its allowed range.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("index {index} out of range for {what} of size {len}")]
    Index {
        what: &'static str,
        index: usize,
        len: usize,
    },

    /// A construction would exceed the configured size limits.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("insufficient numeric precision: {0}")]
    Precision(String),

    /// The maximin volume is zero, so no sampling distribution can be formed.
    #[error("function class is not learnable at alpha = {alpha}: maximin volume is {gamma}")]
    Unlearnable { alpha: f64, gamma: f64 },

    /// A caller violated a structural contract (e.g. a model outside the class).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_unit_open(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(param(name, format!("{value} must lie in (0, 1)")))
    }
}
