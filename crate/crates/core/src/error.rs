use thiserror::Error;

/// Everything that can go wrong between reading a diagram and reporting its homology.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed map: {0}")]
    MalformedMap(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invalid diagram: {}", .0.join("; "))]
    InvalidDiagram(Vec<String>),

    #[error("move pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("move obstructed by a puncture or boundary: {0}")]
    PunctureObstruction(String),

    #[error("bad permutation: {0}")]
    BadPermutation(String),

    #[error("unrealizable merge/split case: {0}")]
    UnrealizableCase(String),

    #[error("inconsistent complex: {0}")]
    InconsistentComplex(String),
}

impl Error {
    /// True for errors caused by the input rather than by an internal invariant breach.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::UnrealizableCase(_) | Error::InconsistentComplex(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
