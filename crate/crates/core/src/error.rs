use thiserror::Error;

/// Errors raised while building or evaluating quantum and hidden-variable
/// scenarios.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square with dimension >= 1 (got {rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("operator is not idempotent (max deviation {0:e})")]
    NotIdempotent(f64),

    #[error("projectors do not sum to the identity (max deviation {0:e})")]
    Incomplete(f64),

    #[error("projectors {first} and {second} are not orthogonal (max deviation {deviation:e})")]
    NotOrthogonal {
        first: usize,
        second: usize,
        deviation: f64,
    },

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace must be 1 (got {0})")]
    BadTrace(f64),

    #[error("span vectors are linearly dependent (pivot {0:e})")]
    RankDeficient(f64),

    #[error("outcome has zero probability ({0:e})")]
    ZeroProbability(f64),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("unknown outcome label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("post-selection is impossible (denominator {0:e})")]
    ImpossiblePostSelection(f64),

    #[error("weights sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("negative weight {value} at `{label}`")]
    NegativeWeight { label: String, value: f64 },

    #[error("transition matrix column `{source_state}` sums to {sum}, expected 1")]
    NotStochastic { source_state: String, sum: f64 },

    #[error("indicator functions of `{measurement}` do not sum to one at `{state}`")]
    IndicatorsNotComplete { measurement: String, state: String },

    #[error("outcome kernel violates the marginal identity at `{state}` (deviation {deviation:e})")]
    MarginalIdentity { state: String, deviation: f64 },

    #[error("components live on different ontic spaces")]
    SpaceMismatch,

    #[error("outcome `{measurement}/{outcome}` carries no projector tag")]
    MissingTag { measurement: String, outcome: String },

    #[error("shared outcome `{0}` has different projectors in the two measurements")]
    SharedProjectorMismatch(String),

    #[error("search space too large: {free} free projectors exceeds cap {cap}")]
    SearchSpaceTooLarge { free: usize, cap: usize },

    #[error("ontic state count {count} exceeds cap {cap}")]
    OnticCapExceeded { count: usize, cap: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
