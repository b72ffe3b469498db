use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpeError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("bracket table violates skew-symmetry for ({a}, {b}): residual {residual}")]
    SkewSymmetry { a: String, b: String, residual: String },
    #[error("unsupported depth: {0} needs a ternary normally ordered product")]
    UnsupportedDepth(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] wmtc_core::Error),
}

pub type Result<T> = std::result::Result<T, OpeError>;
