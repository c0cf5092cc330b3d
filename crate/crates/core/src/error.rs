use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numeric overflow: {0}")]
    Overflow(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("index sets differ: space is over {space}, operator expects {other}")]
    IncompatibleIndexSets { space: String, other: String },
    #[error("operator is not invertible: {0}")]
    NotInvertible(String),
    #[error("index {index} is outside the domain of {what}")]
    OutOfDomain { what: String, index: i64 },
    #[error("search cap exhausted: {0}")]
    SearchCap(String),
    #[error("scalar is not unimodular: |{0}|^2 != 1")]
    NotUnimodular(String),
}

impl Error {
    /// Stable diagnostic code for command-line consumers.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) | Error::InvalidSpec(_) | Error::UnknownPreset(_) | Error::NotUnimodular(_) => "SL-E001",
            Error::IncompatibleIndexSets { .. } => "SL-E002",
            Error::SearchCap(_) => "SL-E003",
            Error::NotInvertible(_) => "SL-E004",
            Error::OutOfDomain { .. } => "SL-E005",
            Error::DivisionByZero | Error::Overflow(_) => "SL-E006",
        }
    }
}
