use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not symmetric within tolerance")]
    NotSymmetric,

    #[error("rank-deficient input: column {column} is linearly dependent")]
    RankDeficient { column: usize },

    #[error("matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("table has zero total mass")]
    ZeroMass,

    #[error("cannot condition on zero-mass value '{0}'")]
    ZeroConditioningMass(String),

    #[error("impossible evidence: every class has zero posterior mass")]
    ImpossibleEvidence,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("constraint targets are infeasible or fitting failed to converge: residual {residual:.3e} after {iterations} iterations")]
    InfeasibleTargets { residual: f64, iterations: usize },

    #[error("mixture initialization lies on the boundary: {0}")]
    BoundaryInit(String),

    #[error("mixture component {component} collapsed (variance {variance:.3e})")]
    ComponentCollapse { component: usize, variance: f64 },

    #[error("training labels are degenerate: both classes must be present")]
    DegenerateLabels,

    #[error("feature map dimension {dim} exceeds the guard of {guard}")]
    FeatureDimGuard { dim: u128, guard: u128 },

    #[error("requested rank {q} exceeds available rank {rank}")]
    RankExceeded { q: usize, rank: usize },

    #[error("vertex {0} is isolated (zero degree)")]
    IsolatedVertex(usize),

    #[error("partition side has zero volume")]
    ZeroVolume,

    #[error("class {0} of the partition is empty")]
    EmptyClass(usize),

    #[error("row {0} reached a zero sum during balancing")]
    ZeroRowSum(usize),

    #[error("enumeration guard exceeded: {got} points (limit {limit})")]
    EnumerationGuard { got: usize, limit: usize },

    #[error("{0} did not converge: {1}")]
    NoConvergence(&'static str, String),
}

pub type Result<T> = std::result::Result<T, Error>;
