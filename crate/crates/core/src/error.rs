use thiserror::Error;

/// Errors raised by the toolkit.
///
/// `Input` covers every precondition violation that the caller could have
/// checked; the remaining variants are computational failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("capacity exceeded: {what} needs more than {limit}")]
    Capacity { what: String, limit: usize },

    #[error("singular path at t = {t}: condition number {condition:.3e} exceeds {cap:.1e}")]
    SingularPath { t: f64, condition: f64, cap: f64 },

    #[error("operator not invertible: {0}")]
    NotInvertible(String),

    #[error("ambiguous eigenvalue clustering: {0}")]
    Clustering(String),

    #[error("trace extension not certified: {0}")]
    NotCertified(String),

    #[error("pole: {0}")]
    Pole(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
