use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation point outside the domain: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("polynomial is not {expected} (q = {q}, n = {n})")]
    Causality {
        expected: &'static str,
        q: i64,
        n: usize,
    },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("state matrix is not Schur stable (spectral radius {0})")]
    Unstable(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
