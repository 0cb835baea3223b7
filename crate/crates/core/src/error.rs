use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("elements belong to different spaces")]
    SpaceMismatch,

    #[error("a space needs at least one atom")]
    EmptySpace,

    #[error("weight of atom {atom} is not strictly positive")]
    NonPositiveWeight { atom: usize },

    #[error("expected {expected} coordinates, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("coordinate {atom} is negative")]
    NegativeCoordinate { atom: usize },

    #[error("coordinate {atom} = {value} lies outside the function domain [{lo}, {hi}]")]
    OutsideDomain { atom: usize, value: f64, lo: f64, hi: f64 },

    #[error("coordinate {atom} is not a probability (outside [0, 1])")]
    InvalidProbability { atom: usize },

    #[error("element is not in the range of the conditional expectation (not block-constant)")]
    NotInRange,

    #[error("partition does not refine the range of the conditional expectation")]
    NotRefinement,

    #[error("independence hypothesis fails: {0}")]
    NotIndependent(String),

    #[error("full representation with n = {n} exceeds the limit of {limit} events")]
    BlowupGuard { n: usize, limit: usize },

    #[error("level j = {j} outside 0..={n}")]
    LevelOutOfRange { j: usize, n: usize },

    #[error("operation requires the full representation")]
    RepresentationUnsupported,

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
