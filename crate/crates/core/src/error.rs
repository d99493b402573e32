use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("basis vectors are not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("POVM incomplete (effects sum deviates from identity by {deviation:.3e})")]
    Incomplete { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid effect `{label}`: {reason}")]
    InvalidEffect { label: String, reason: String },

    #[error("duplicate outcome label `{0}`")]
    DuplicateLabel(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("outcome probability {probability:.3e} is too small to condition on")]
    ZeroProbability { probability: f64 },

    #[error("observable has nonzero mean {mean:.3e}")]
    NonzeroMean { mean: f64 },

    #[error("measurement is not rank-1 projective: {0}")]
    NotProjective(String),

    #[error("state is not pure (purity {purity:.12})")]
    NotPure { purity: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("joint and reduced evaluations disagree at sigma = {sigma}: {joint} vs {reduced}")]
    CrossCheck { sigma: f64, joint: f64, reduced: f64 },

    #[error("parse error {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
