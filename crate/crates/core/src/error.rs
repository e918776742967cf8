use thiserror::Error;

/// Errors raised by the free-field toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Vec<String>, right: Vec<String> },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("letter `{0}` is not part of the alphabet")]
    UnknownLetter(String),

    #[error("no matrix assigned to letter `{0}`")]
    MissingAssignment(String),

    #[error("constant coefficient matrix is singular; element is not given as a regular system")]
    NotRegular,

    #[error("cannot invert the zero element")]
    InverseOfZero,

    #[error("operation requires a system certified minimal: {0}")]
    NotCertified(String),

    #[error("system is not in the expected normal form: {0}")]
    FormMismatch(String),

    #[error("transformation is not admissible: {0}")]
    NotAdmissible(String),

    #[error("operation needs a non-empty system")]
    EmptySystem,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("schema violation: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
