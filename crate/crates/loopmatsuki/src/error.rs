use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precision floor: {0}")]
    PrecisionFloor(String),
    #[error("not anti-fixed: {0}")]
    NotAntiFixed(String),
    #[error("not invertible: {0}")]
    NonInvertible(String),
    #[error("coweight {0:?} is not admissible for this datum")]
    Inadmissible(Vec<i64>),
    #[error("invalid pure inner twist: {0}")]
    InvalidTwist(String),
    #[error("matrix is not unipotent: {0}")]
    NotUnipotent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Iwahori membership equation fails: {0}")]
    Membership(String),
    #[error("duality label mismatch: {0}")]
    LabelMismatch(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    /// Process exit code for the command-line surface.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InvalidConfig(_) => 2,
            Error::Unsupported(_) => 3,
            Error::PrecisionFloor(_) => 4,
            Error::NotAntiFixed(_) => 5,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
