use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("simplex stalled after {iterations} iterations")]
    IterationLimit { iterations: usize },
    #[error("invalid belief: {0}")]
    InvalidBelief(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid utility: {0}")]
    InvalidUtility(String),
    #[error("belief {0} is outside the domain")]
    OutOfDomain(String),
    #[error("query {0} lies outside the convex hull of the points")]
    OutsideHull(String),
    #[error("prior not representable: coordinate {coordinate} (value {value}) cannot be reached with denominator {denominator} on this grid")]
    PriorNotRepresentable { coordinate: usize, value: f64, denominator: u32 },
    #[error("lattice has more than {cap} elements; use a coarser grid or a smaller denominator")]
    LatticeCap { cap: usize },
    #[error("more than {cap} maximal cliques")]
    CliqueCap { cap: usize },
    #[error("game has {size} elements, above the verifier cap of {cap}; use a coarser lattice")]
    VerifierCap { size: usize, cap: usize },
    #[error("relation is not a partial order: {0}")]
    OrderViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("eps = 0 requires continuous mediator utilities; mediator {0} is not declared continuous")]
    DiscontinuousAtZeroEps(usize),
    #[error("linear program failed: {0}")]
    LpFailure(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
