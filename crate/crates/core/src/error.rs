use thiserror::Error;

/// Errors raised across the simulation, learning and harness layers.
#[derive(Debug, Error)]
pub enum IsacError {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        actual: String,
    },

    #[error("invalid configuration at `{path}`: {message}")]
    InvalidConfig { path: String, message: String },

    #[error("episode already finished; call reset before stepping again")]
    EpisodeFinished,

    #[error("search space of {size} precoders exceeds the budget of {budget}")]
    SearchBudgetExceeded { size: u128, budget: u128 },

    #[error("empty input to {0}")]
    EmptyInput(&'static str),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, IsacError>;

pub(crate) fn dim_mismatch(
    context: &'static str,
    expected: impl std::fmt::Debug,
    actual: impl std::fmt::Debug,
) -> IsacError {
    IsacError::DimensionMismatch {
        context,
        expected: format!("{expected:?}"),
        actual: format!("{actual:?}"),
    }
}

pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> IsacError {
    IsacError::InvalidConfig {
        path: path.into(),
        message: message.into(),
    }
}
