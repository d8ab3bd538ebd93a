use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse grouping of errors, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or arguments.
    Input,
    /// The input is well formed but does not have the checked property.
    Verification,
    /// A proven identity or theorem consequence failed. Either the code or the
    /// mathematics is wrong.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index {index} out of range (bound {bound})")]
    Index { index: usize, bound: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("malformed permutation: {0}")]
    Permutation(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("structure is not {property}: {detail}")]
    Structure { property: &'static str, detail: String },

    #[error("not a biplane: {axiom} violated ({witness})")]
    NotBiplane { axiom: &'static str, witness: String },

    #[error("not a PBIBD: {0}")]
    NotPbibd(String),

    #[error("expectation failed: {0}")]
    Expectation(String),

    #[error("axiom {axiom} violated: {detail}")]
    Axiom { axiom: &'static str, detail: String },

    #[error(
        "not an association scheme: p[{h}][{i}][{j}] is {first_count} at ({},{}) but {second_count} at ({},{})",
        first.0, first.1, second.0, second.1
    )]
    NotAScheme {
        h: usize,
        i: usize,
        j: usize,
        first: (usize, usize),
        first_count: u32,
        second: (usize, usize),
        second_count: u32,
    },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("precondition not satisfied: {0}")]
    Precondition(String),

    #[error("arithmetic inconsistency: {0}")]
    ArithmeticInconsistency(String),

    #[error("counterexample: {0}")]
    Counterexample(String),

    #[error("search bug: {0}")]
    SearchBug(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Dimension(_)
            | Error::Index { .. }
            | Error::Shape(_)
            | Error::Permutation(_)
            | Error::Parse { .. }
            | Error::Unsupported(_)
            | Error::Parameter(_)
            | Error::Io(_)
            | Error::Json(_) => ErrorKind::Input,
            Error::Structure { .. }
            | Error::NotBiplane { .. }
            | Error::NotPbibd(_)
            | Error::Expectation(_)
            | Error::Axiom { .. }
            | Error::NotAScheme { .. }
            | Error::Hypothesis(_)
            | Error::Precondition(_) => ErrorKind::Verification,
            Error::ArithmeticInconsistency(_) | Error::Counterexample(_) | Error::SearchBug(_) => ErrorKind::Internal,
        }
    }
}
