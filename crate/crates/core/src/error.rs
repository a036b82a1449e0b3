use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    /// The error generator left the principal branch (|ε| ≥ π/2, or w ≤ 0).
    #[error("branch error: {0}")]
    Branch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("planning error: {0}")]
    Planning(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("finite-difference error: {0}")]
    Difference(String),

    #[error("not a B-family sequence: {0}")]
    NotBFamily(String),
}

impl Error {
    /// Numeric-domain failures, as opposed to malformed input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Branch(_) | Error::Precision(_) | Error::Fit(_) | Error::Difference(_) | Error::Planning(_)
        )
    }
}
