use thiserror::Error;

/// Errors raised by the geometry, mixed-volume and solver layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("curvature required: grid body carries no curvature values")]
    CurvatureRequired,

    #[error("origin not interior: {0}")]
    OriginNotInterior(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported dimension {0} (supported: {1})")]
    UnsupportedDimension(usize, &'static str),

    #[error("directions do not bound: halfspace intersection is unbounded")]
    DirectionsDoNotBound,

    #[error("not strictly convex: {0}")]
    NotConvex(String),

    #[error("φ undefined at 0 for decreasing φ")]
    PhiUndefinedAtZero,

    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),

    #[error("invalid φ: {0}")]
    InvalidPhi(String),

    #[error("not classifiable on grid: {0}")]
    NotClassifiable(String),

    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("φ₁,φ₂ must share monotonicity class")]
    MixedMonotonicity,

    #[error("segment mixed volume undefined for decreasing φ")]
    SegmentUndefinedForDecreasing,

    #[error("interpretation hypothesis violated: {0}")]
    InterpretationHypothesis(String),

    #[error("hypotheses not satisfied: {0}")]
    HypothesesNotSatisfied(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
