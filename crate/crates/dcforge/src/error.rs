use thiserror::Error;

/// Unified error type for the toolkit.
#[derive(Debug, Clone, Error)]
pub enum DcError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e})")]
    NonSymmetricInput { max_asymmetry: f64 },

    #[error("matrix is not positive semidefinite (Rayleigh quotient {witness:e})")]
    NotPsd { witness: f64 },

    #[error("dimension {dim} too large for grid search (limit {limit})")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("problem has DC constraints; this operation requires none")]
    HasConstraints,

    #[error("initial point violates the constraints (violation {violation:e})")]
    InfeasiblePoint { violation: f64 },

    #[error("whole space has no linear minimization oracle; route through an epigraph subproblem")]
    LmoUnavailable,

    #[error("domain has infinite diameter")]
    UnboundedDomain,

    #[error("subproblem is unbounded below (iterate norm exceeded {threshold:e})")]
    Unbounded { threshold: f64 },

    #[error("linearized constraint set is empty or has empty interior")]
    InfeasibleSubproblem,

    #[error("inner solver stopped after {iterations} iterations with residual {residual:e} > tolerance")]
    MaxIters { iterations: usize, residual: f64 },

    #[error("objective and constraints must be all concave or all convex; mixed curvature is unsupported")]
    MixedCurvature,

    #[error("prox inversion found no root in the search bracket")]
    NoSolution,

    #[error("linear system is singular or badly scaled")]
    SingularSystem,

    #[error("subproblem shape not supported: {0}")]
    UnsupportedSubproblem(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for DcError {
    fn from(e: std::io::Error) -> Self {
        DcError::Io(e.to_string())
    }
}
