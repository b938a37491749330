use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("truncation tail {tail:e} at dimension {dim} exceeds budget {budget:e}")]
    TruncationBudget { dim: usize, tail: f64, budget: f64 },
    #[error("Taylor series not converged: omitted term norm {omitted:e} vs result norm {result:e}")]
    SeriesNotConverged { omitted: f64, result: f64 },
}
