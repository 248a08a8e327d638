use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("invalid algebra spec: {0}")]
    InvalidSpec(String),

    #[error("cartan action is not diagonal on basis vector {index}: {detail}")]
    NonDiagonalizable { index: usize, detail: String },

    #[error("root {weight} spans several heights: {heights:?}")]
    MixedHeight { weight: String, heights: Vec<i32> },

    #[error("structure constant is not integral: [{left}, {right}] has coefficient {value}")]
    NonIntegral {
        left: usize,
        right: usize,
        value: String,
    },

    #[error("element is outside the span of the basis: {0}")]
    NotInSpan(String),

    #[error("divided power of odd generator with exponent {0}")]
    OddDividedPower(u32),

    #[error("degree of the zero element is undefined")]
    ZeroDegree,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("no straightening identity matches the pair {left} · {right}: {reason}")]
    NoMatchingIdentity {
        left: String,
        right: String,
        reason: String,
    },

    #[error("integrality violation: coefficient {coefficient} on {monomial}; trace: {trace:?}")]
    IntegralityViolation {
        monomial: String,
        coefficient: String,
        trace: Vec<String>,
    },

    #[error("rewriting did not terminate within {0} steps")]
    StepLimit(usize),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
