use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not a density matrix: {0}")]
    InvalidState(String),

    #[error("parameter `{name}` out of range: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("infinite max-relative entropy: support of rho is not contained in support of tau")]
    InfiniteMaxRelativeEntropy,

    #[error("catalyst never helps: F(tau) = {f_tau} does not exceed F(rho) = {f_rho}")]
    CatalystNeverHelps { f_rho: f64, f_tau: f64 },

    #[error("threshold is cleared on every round (plateau gain {plateau_gain}); reuse is unbounded")]
    UnboundedReuse { plateau_gain: f64 },

    #[error("simulation too large ({size} > {limit}); reduce n, M or the number of rounds")]
    TooLarge { size: u128, limit: u128 },
}

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
