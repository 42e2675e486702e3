use thiserror::Error;

/// Errors produced by the construction, solver and parsing layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("degenerate segment: both endpoints are {0}")]
    DegenerateSegment(String),

    #[error("ray direction must be non-zero")]
    ZeroDirection,

    #[error("invalid chord diagram: {0}")]
    InvalidDiagram(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("chord {0} is not present in the diagram")]
    UnknownChord(usize),

    #[error("start position {start} is outside [1, {max}]")]
    StartOutOfRange { start: usize, max: usize },

    #[error("instance too large: {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("instance is not in general position: {0}")]
    NotGeneralPosition(String),

    #[error("segment union is not connected")]
    Disconnected,

    #[error("needle offset search did not converge after {0} halvings")]
    EpsilonSearchExhausted(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid tolerance: {0}")]
    InvalidDelta(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
