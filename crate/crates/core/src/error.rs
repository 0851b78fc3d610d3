use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^61")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("a line needs two distinct points")]
    DegeneratePair,
    #[error("line coefficients (0, 0, c) do not describe a line")]
    DegenerateLine,
    #[error("homogeneous coordinates (0, 0, 0) do not describe a point or line")]
    ZeroVector,
    #[error("points are collinear; the projective frame is singular")]
    Collinear,
    #[error("at least 2 points are required, got {0}")]
    TooFewPoints(usize),
    #[error("the point/line configuration has no incidences")]
    EmptyIncidence,
    #[error("apex point is not a member of the point set")]
    ApexNotInSet,
    #[error("apex point must not be a member of the covered set")]
    ApexInSet,
    #[error("no point has a covering set of size at least 2")]
    NoCandidate,
    #[error("every popular supporting line through p2 also passes through p1")]
    NoValidLine,
    #[error("no pair p3 != p4 on the chosen line yields a nonempty common cover")]
    EmptyR,
    #[error("a point was sent to the line at infinity")]
    NonAffineImage,
    #[error("p2 coincides projectively with p3 or p4; the pencil slope is undefined")]
    LambdaDegenerate,
    #[error("division by zero on {} edge(s)", .0.len())]
    DivisionByZero(Vec<(u64, u64)>),
    #[error("partial ratio set is empty")]
    EmptyRatioSet,
    #[error("no candidate subset reaches the popular-pair fraction (best {best_fraction:.4}, need {required:.4})")]
    NoSelection { best_fraction: f64, required: f64 },
    #[error("graph density below (1 - eps): {edges} edges of {possible} possible")]
    DensityPrecondition { edges: u64, possible: u64 },
    #[error("eps = {0} is outside the admissible range")]
    EpsOutOfRange(String),
    #[error("edge ({0}, {1}) has an endpoint outside the vertex sets")]
    EdgeOutOfRange(u64, u64),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u64, u64),
    #[error("set must be nonempty")]
    EmptySet,
    #[error("requested size {requested} exceeds the available {available}")]
    Oversize { requested: u64, available: u64 },
    #[error("invalid generator parameters: {0}")]
    InvalidSpec(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
