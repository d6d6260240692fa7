use thiserror::Error;

/// Errors raised by state construction, numerics and the command-line layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cutoff {given} too small for tolerance {tol:e}; try at least {suggested}")]
    CutoffTooSmall { given: usize, suggested: usize, tol: f64 },

    #[error("unsupported ket kind: {0}")]
    UnsupportedKet(String),

    #[error("degenerate normalization: {0}")]
    DegenerateNormalization(String),

    #[error("inconsistent moments: {0}")]
    InconsistentMoments(String),

    #[error("numeric inconsistency: {0}")]
    NumericInconsistency(String),

    #[error("operation not applicable: {0}")]
    Inapplicable(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
