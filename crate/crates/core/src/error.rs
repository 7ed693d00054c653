use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("enumeration bound exceeded: n = {n} > {max}")]
    EnumerationBound { n: usize, max: usize },

    #[error("no single-solution instance after {tries} tries")]
    GenerationFailed { tries: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("instance validation failed: {0}")]
    Validation(String),

    #[error("eigensolver did not converge: {0}")]
    Convergence(String),

    #[error("unfolding failed: {0}")]
    Unfolding(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("minimum at scan boundary t = {t}, delta = {delta}")]
    BoundaryMinimum { t: f64, delta: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
