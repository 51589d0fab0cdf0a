use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("q-integer [{0}] is undefined; index must be at least 1")]
    ZeroQInteger(usize),

    #[error("invalid permutation {0:?}: entries must be exactly 1..=n")]
    InvalidPerm(Vec<u32>),

    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("generator index {k} out of range for degree {degree} (need 1 <= k <= {})", degree.saturating_sub(1))]
    GeneratorOutOfRange { k: usize, degree: usize },

    #[error("sequence letters must be positive integers")]
    ZeroLetter,

    #[error("expansion in degree {degree} exceeds the size guard of {limit}; force it explicitly")]
    DegreeGuard { degree: usize, limit: usize },

    #[error("sequence {0:?} is not covered by the closed formula")]
    NotCovered(Vec<usize>),

    #[error("q = {0} is outside (0, 1]")]
    QOutOfRange(String),

    #[error("walk can never complete: every attempt restarts")]
    CertainFailure,

    #[error("sample {sample} exceeded {limit} restarts; q is too small for practical simulation")]
    TooManyRestarts { sample: u64, limit: u64 },

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("{0}")]
    Parse(String),
}
