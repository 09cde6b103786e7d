use thiserror::Error;

/// Errors raised by the probability engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("space must have dimension at least 1 (got {dim} for `{label}`)")]
    EmptySpace { label: String, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("space mismatch: `{left}` vs `{right}`")]
    SpaceMismatch { left: String, right: String },

    #[error(
        "operator is not defined on the registered factorization `{composite}` (found `{found}`)"
    )]
    UnknownFactorization { composite: String, found: String },

    #[error("factor index {index} out of range for composite with {factors} factors")]
    FactorOutOfRange { index: usize, factors: usize },

    #[error("operator fails the {kind} check: residual {residual:e} exceeds tolerance {tol:e}")]
    Structure {
        kind: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("invalid probability operator ({invariant}): residual {residual:e} exceeds tolerance {tol:e}")]
    InvalidState {
        invariant: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("conditioning on an eventuality of probability {probability:e} (zero-probability threshold {threshold:e})")]
    ZeroProbability { probability: f64, threshold: f64 },

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error(
        "channels {row} and {col} do not commute: residual {residual:e} exceeds tolerance {tol:e}"
    )]
    NonCommuting {
        row: usize,
        col: usize,
        residual: f64,
        tol: f64,
    },

    #[error("quantitative values must be pairwise distinct (channels {0} and {1} share a value)")]
    DegenerateValues(usize, usize),

    #[error(
        "perception observable has mixed channel ranks {ranks:?}; a single common rank is required"
    )]
    MixedRank { ranks: Vec<usize> },

    #[error("channel rank {rank} exceeds space dimension {dim}")]
    RankExceedsDimension { rank: usize, dim: usize },

    #[error("invalid classical model: {0}")]
    InvalidClassicalModel(String),

    #[error("unknown sample point `{0}`")]
    UnknownSamplePoint(String),

    #[error("events belong to different classical models")]
    ModelMismatch,

    #[error("observer population is empty")]
    EmptyPopulation,

    #[error("{quantity} must be positive (got {value})")]
    NonPositive { quantity: &'static str, value: f64 },

    #[error("all information capacities are zero; weights cannot be normalized")]
    ZeroCapacity,

    #[error("gross probabilities of observer {observer} sum to {sum}, not 1")]
    UnnormalizedGross { observer: usize, sum: f64 },

    #[error("lifetime profile carries zero total mass")]
    ZeroMass,

    #[error("invalid lifetime segment {index}: {reason}")]
    InvalidSegment { index: usize, reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
