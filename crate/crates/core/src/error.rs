use thiserror::Error;

/// Errors raised by smplab operations.
///
/// Every variant is a precondition violation on the caller's input; none of
/// them indicate internal failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("word must contain at least one letter")]
    EmptyWord,

    #[error("invalid letter {0:?}: words are written over the alphabet {{0,1}}")]
    InvalidLetter(char),

    #[error("word {0} is a proper power of a shorter word")]
    NotPrimitive(String),

    #[error("gcd({p}, {q}) must be 1")]
    NotCoprime { p: u64, q: u64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("five-tuple is not realizable by real matrices (min(4u-x^2, delta) = {margin} > 0)")]
    Unrealizable { margin: f64 },

    #[error("pair is not in the {region} region: {detail}")]
    WrongRegion { region: &'static str, detail: String },

    #[error("zero matrix in the {0} slot")]
    ZeroMatrix(&'static str),

    #[error("maximum word length {requested} exceeds the limit {limit}")]
    WordTooLong { requested: usize, limit: usize },

    #[error("unknown distribution {0:?} (expected normal or uniform01)")]
    UnknownDistribution(String),

    #[error("strict concavity violated at {t1} / {t2}: deficit {deficit:e}")]
    ConcavityViolation { t1: String, t2: String, deficit: f64 },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
