use thiserror::Error;

/// Errors raised by the exact and numeric pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("cannot parse word `{word}`: {reason}")]
    WordParse { word: String, reason: String },

    #[error("matrix has determinant {0}, expected +1")]
    NotSpecialLinear(i64),

    #[error("({c},{d}) is not in A({n}): gcd(c,d,N) != 1")]
    NotInCosetSpace { n: u32, c: i64, d: i64 },

    #[error("level must be at least 1")]
    InvalidLevel,

    #[error("weight/level pair (k,N)=({k},{n}) is excluded")]
    ExcludedWeightLevel { k: u32, n: u32 },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),

    #[error("shape mismatch between equivariant vectors")]
    ShapeMismatch,

    #[error("input is not in the required space: {0}")]
    NotInSpace(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("certification failed: {0}")]
    CertificationFailed(String),

    #[error("divergent series: {0}")]
    Divergent(String),

    #[error("asymptotic series did not reach the target precision: {0}")]
    NoConvergence(String),

    #[error("regularization degree overflow (T^2 term) for {0}")]
    TDegreeOverflow(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
