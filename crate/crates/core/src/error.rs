use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("invalid gate targets: {0}")]
    InvalidTargets(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not unitary (max |U^dagger U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("SVD of a {rows}x{cols} matrix did not converge after {sweeps} sweeps")]
    SvdNonConvergence {
        rows: usize,
        cols: usize,
        sweeps: usize,
    },

    #[error(
        "squeezing r = {required} exceeds the cap {cap}; choose a smaller lambda (currently {lambda})"
    )]
    SqueezeCapExceeded {
        required: f64,
        cap: f64,
        lambda: f64,
    },

    #[error("gate `{0}` is active or non-unitary and has no mode-map representation")]
    NonPassiveGate(&'static str),

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("mask is not separable: {0}")]
    NotSeparable(String),

    #[error("unphysical state: minimum eigenvalue of cov + i*Omega is {min_eigenvalue:e}")]
    Unphysical { min_eigenvalue: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
