use thiserror::Error;

use crate::metric::MetricViolation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("coordinate outside [0,1]: {0}")]
    OutOfCube(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(MetricViolation),

    #[error("not a Katětov function: {0}")]
    NotKatetov(String),

    #[error("functions are defined over different base spaces")]
    MismatchedBase,

    #[error("function {0} is not certified Lipschitz-1 with values in [0,1]")]
    Uncertified(String),

    #[error("index overflow: {0}")]
    IndexOverflow(String),

    #[error("point outside the convex hull: {0}")]
    NotInHull(String),

    #[error("no enumerated point within 1/{m} of source point {index}")]
    ApproximationImpossible { index: usize, m: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("witness pool exhausted: {0}")]
    ExhaustedPool(String),

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("ambiguous structure: {0}")]
    Ambiguous(String),
}

impl Error {
    /// Process exit code for the CLI contract: 2 domain violation, 3 parse,
    /// 4 guard exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 3,
            Error::GuardExceeded(_) => 4,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<MetricViolation> for Error {
    fn from(v: MetricViolation) -> Self {
        Error::InvalidMetric(v)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
