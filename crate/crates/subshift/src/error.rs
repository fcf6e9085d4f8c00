use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate letter `{letter}`")]
    DuplicateLetter { line: usize, letter: String },
    #[error("line {line}: image uses undeclared letter `{letter}`")]
    UndeclaredLetter { line: usize, letter: String },
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(String),
    #[error("letter index {0} is out of range")]
    LetterOutOfRange(usize),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("the morphism is not an endomorphism")]
    NotEndomorphism,
    #[error("cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, limit: usize) -> Self {
        Error::CapExceeded { what: what.into(), limit }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
