use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameters outside the admissible cone: {0} violated")]
    OutOfCone(String),

    #[error("row index x={x} exceeds floor(n/2) for n={n}")]
    BadRow { n: u32, x: u32 },

    #[error("series does not terminate: no non-positive integer numerator parameter")]
    NonTerminating,

    #[error("denominator pole at series index {index}")]
    DenominatorPole { index: usize },

    #[error("q must be a positive rational, got {0}")]
    InvalidQ(String),

    #[error("no special-case closed form applies (need M*N=0, k=l or l=0)")]
    NotSpecialCase,

    #[error("degenerate denominator in recurrence at x={0}")]
    DegenerateDenominator(u32),

    #[error("distribution invariant violated: {0}")]
    InvariantViolation(String),

    #[error("ratio regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("argument outside the function domain: {0}")]
    DomainError(String),

    #[error("epsilon must lie in (0,1), got {0}")]
    BadEpsilon(f64),

    #[error("invalid deltas: {0}")]
    BadDeltas(String),

    #[error("brute-force oracle limited to n <= {limit}, got n={n}")]
    TooLarge { n: u32, limit: u32 },

    #[error("invalid ratios: {0}")]
    BadRatios(String),

    #[error("undefined for n=0")]
    EmptySystem,
}
