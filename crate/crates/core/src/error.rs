use thiserror::Error;

/// Errors raised by the word engine, the simplicial machinery and the numeric backends.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree mismatch: expected degree {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("unbound generator `{0}`")]
    UnboundGenerator(String),

    #[error("index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("malformed monotone map: {0}")]
    MalformedMonotone(String),

    #[error("parse error in `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid attaching data for `{cell}`: {reason}")]
    InvalidAttaching { cell: String, reason: String },

    #[error("word is not in the Moore complex (face {face} is not trivial)")]
    NotMooreMember { face: usize },

    #[error("group invariant drift {drift:e} exceeds {limit:e}")]
    Renormalization { drift: f64, limit: f64 },

    #[error("loop is not closed: endpoint distance {0:e} from identity")]
    LoopNotClosed(f64),

    #[error("sample step too coarse at index {index}: angle {angle}")]
    StepTooCoarse { index: usize, angle: f64 },

    #[error("path endpoint mismatch: distance {0:e}")]
    EndpointMismatch(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
