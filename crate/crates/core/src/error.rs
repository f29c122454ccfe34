use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode index {mode} out of range for {mode_count} modes")]
    ModeOutOfRange { mode: usize, mode_count: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator has vanishing trace ({0:e})")]
    ZeroTrace(f64),

    #[error("operator is not Hermitian (defect {0:e})")]
    NotHermitian(f64),

    #[error("matrix is singular or ill-conditioned (condition number {condition:e}): {context}")]
    Singular { condition: f64, context: String },

    #[error("displacement |r| = {norm} exceeds the accuracy guard {limit}")]
    DisplacementGuard { norm: f64, limit: f64 },

    #[error("covariance matrix not symmetric (defect {0:e})")]
    Asymmetric(f64),

    #[error("covariance matrix has a complex residue {0:e} where a real matrix is required")]
    ComplexResidue(f64),

    #[error("filter acceptance {0:e} is below tolerance")]
    VanishingAcceptance(f64),

    #[error("round {round}: truncation leakage {leakage:e} exceeds bound {bound:e}")]
    Leakage { round: usize, leakage: f64, bound: f64 },

    #[error("nonzero first moments (|d| = {0:e}) are not supported here")]
    NonzeroMean(f64),

    #[error("fixed point does not exist for this filter/state pair: {0}")]
    NoFixedPoint(String),

    #[error("state size {0} exceeds the dense-simulation guard")]
    TooLarge(usize),

    #[error("configuration error: {0}")]
    Config(String),
}
