use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Cartan type {family}{rank}: {reason}")]
    InvalidCartanType {
        family: char,
        rank: usize,
        reason: &'static str,
    },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid level: {0}")]
    InvalidLevel(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("weight {0} is not in the coroot lattice")]
    NotInCorootLattice(String),
    #[error("probe vector pairs to zero with the distinguished root")]
    DegenerateProbe,
    #[error("S-matrix normalization failed: S S^dagger deviates from c*I by {residual:e}")]
    Normalization { residual: f64 },
    #[error("no vacuum label: {0}")]
    NoVacuum(String),
    #[error("Verlinde coefficients not integral: worst residual {residual:e}")]
    Integrality { residual: f64 },
    #[error("negative fusion coefficient {value:e}")]
    Negativity { value: f64 },
    #[error("translation bound too small: radius {radius:.3} insufficient, need at least {required:.3}")]
    TruncationBound { radius: f64, required: f64 },
    #[error("theta sum cannot reach tolerance {eps:e} within radius cap {cap}")]
    ThetaTolerance { eps: f64, cap: f64 },
    #[error("series error: {0}")]
    Series(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
