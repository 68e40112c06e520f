use thiserror::Error;

/// Errors raised by the probability algebra, channel construction and bound evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown or duplicated variable: {0}")]
    Name(String),

    #[error("conditioning event has probability {0:e}")]
    Conditioning(f64),

    #[error("inconsistent factorization: {0}")]
    Factorization(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("probabilities sum to {0} (drift beyond 1e-9)")]
    Normalization(f64),

    #[error("invalid channel specification: {0}")]
    Spec(String),

    #[error("structure audit failed: {0}")]
    Audit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
