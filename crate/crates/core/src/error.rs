use thiserror::Error;

/// Errors raised by state construction, criterion evaluation and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spin magnitude: 2j = {0} must be a positive integer")]
    InvalidSpin(f64),

    #[error("Pauli convention is only defined for spin-1/2, got j = {0}")]
    Convention(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("site index {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("composite dimension {dim} exceeds the dense cap of {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("amplitude vector is identically zero")]
    ZeroAmplitudes,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inequality form not valid for n = {n}, t = {t}: {reason}")]
    InvalidForm { n: usize, t: usize, reason: &'static str },

    #[error("squeezing parameter undefined: mean spin {0:e} vanishes")]
    UndefinedXi(f64),

    #[error("no F_J curve for j = {0} in the bank")]
    MissingCurve(f64),

    #[error("query x = {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("observables on A and B share site {0}")]
    OverlappingSupport(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
