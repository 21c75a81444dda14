use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("degenerate map: the resultant vanishes identically")]
    DegenerateMap,
    #[error("lift is not normalized at the place (order {0})")]
    NotNormalized(i64),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("precision exhausted at {0} coefficients")]
    PrecisionExhausted(usize),
    #[error("excluded parameter: {0}")]
    ExcludedParameter(String),
    #[error("place is not rational over Q: irreducible factor {0}")]
    IrrationalPlace(String),
    #[error("tolerance {0} unreachable within the iteration budget")]
    ToleranceUnreachable(String),
    #[error("parameter lies on the support of the divisor")]
    OnSupport,
    #[error("pair is not hole-avoiding (orbit vanishes at step {0})")]
    NotHoleAvoiding(usize),
    #[error("inconsistent itinerary: {0}")]
    InconsistentItinerary(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}
