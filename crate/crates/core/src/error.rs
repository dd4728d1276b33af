use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed cube: {0}")]
    Structural(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unit cube invalid: {0}")]
    UnitInvalid(String),

    #[error("parse error at {locus}: {message}")]
    Parse { locus: String, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("no such object: {0}")]
    NoSuchObject(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parity obstruction: {0}")]
    Parity(String),

    #[error("not enough mutually orthogonal Latin squares: {0}")]
    Availability(String),

    #[error("no PBD(v, {{4,5,6}}) available for v = {0}")]
    NoDesign(usize),

    #[error("degenerate design: {0}")]
    Degenerate(String),

    #[error("strategy unavailable: {0}")]
    Unavailable(String),

    #[error("plan invalid: {0}")]
    PlanInvalid(String),

    #[error("arithmetic overflow in cube entries")]
    Overflow,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(locus: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            locus: locus.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
