use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    /// A documented precondition of an operation does not hold.
    #[error("domain error: {0}")]
    Domain(String),
    /// A structural invariant of a phase-space point or table failed.
    #[error("invariant `{name}` violated: {detail}")]
    Invariant { name: String, detail: String },
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("triple is not in the image of the Toda map: {0}")]
    NotInImage(String),
    #[error("resonance failure at k = {k}: {detail}")]
    Resonance { k: usize, detail: String },
}

impl Error {
    pub fn invariant(name: &str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            name: name.to_string(),
            detail: detail.into(),
        }
    }

    /// True for errors caused by malformed or out-of-domain input, as
    /// opposed to a failed mathematical check.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Domain(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
