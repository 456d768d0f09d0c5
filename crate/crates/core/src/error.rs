use thiserror::Error;

use crate::regions::Condition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("two of the input points coincide")]
    Coincident,
    #[error("the three points are collinear; the circumcircle degenerates")]
    Collinear,
    #[error("a point triple contains a repeated point")]
    DegenerateTriple,
    #[error("the four points are not pairwise distinct")]
    DegeneratePoints,
    #[error("the angles are not pairwise distinct modulo 2π")]
    DegenerateAngles,
    #[error("Möbius coefficients have vanishing determinant")]
    SingularMap,
    #[error("invalid configuration: {0}")]
    DegenerateConfig(String),
    #[error("expansion point {0} coincides with a singular point")]
    CenterIsSingular(crate::C64),
    #[error("exponents at z_{index} differ by an integer (logarithmic case)")]
    DegenerateExponents { index: usize },
    #[error("|z - center| = {distance} exceeds the admissible radius {limit}")]
    OutsideDisc { distance: f64, limit: f64 },
    #[error("evaluation point lies on the branch cut")]
    OnBranchCut,
    #[error("series tail {tail:e} above tolerance after {terms} terms")]
    NotConverged { tail: f64, terms: usize },
    #[error("integration path passes within {distance} of z_{index} (clearance {clearance})")]
    PathTooCloseToSingularity { index: usize, distance: f64, clearance: f64 },
    #[error("integrator step size underflow")]
    StepUnderflow,
    #[error("evaluation point is outside the convergence disc of z_{index}")]
    PointOutsideDisc { index: usize },
    #[error("Wronskian of the target pair is numerically zero ({0:e})")]
    SingularDenominator(f64),
    #[error("{0} is violated")]
    ConditionViolated(Condition),
    #[error("circumcenter of triple {0:?} is not inside all three convergence discs")]
    CenterOutsideDiscs([usize; 3]),
    #[error("no chain of admissible triples connects z_{0} and z_{1}")]
    NoChain(usize, usize),
    #[error("cross-ratio value is degenerate for this frame")]
    DegenerateA,
    #[error("connection matrices use different basis conventions")]
    ConventionMismatch,
    #[error("connection matrices do not share the intermediate basis")]
    BasisMismatch,
    #[error("singular point index must be in 1..=4, got {0}")]
    InvalidIndex(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input values.
    Parameter,
    /// Degenerate geometry or exponents.
    Degeneracy,
    /// A point or configuration outside the admissible domain.
    Domain,
    /// Truncation or integrator failures.
    Convergence,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidIndex(_) | InvalidParameter(_) => ErrorClass::Parameter,
            Coincident | Collinear | DegenerateTriple | DegeneratePoints | DegenerateAngles
            | SingularMap | DegenerateConfig(_) | CenterIsSingular(_)
            | DegenerateExponents { .. } | DegenerateA | SingularDenominator(_) => {
                ErrorClass::Degeneracy
            }
            OutsideDisc { .. } | OnBranchCut | PathTooCloseToSingularity { .. }
            | PointOutsideDisc { .. } | ConditionViolated(_) | CenterOutsideDiscs(_)
            | NoChain(..) | ConventionMismatch | BasisMismatch => ErrorClass::Domain,
            NotConverged { .. } | StepUnderflow => ErrorClass::Convergence,
        }
    }
}
