use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude at position {position} would leave the stored window [{lo}, {hi}]")]
    BoundaryOverflow { position: i64, lo: i64, hi: i64 },

    #[error("requested {requested} steps but the field only has budget for {remaining} more")]
    BudgetExceeded { requested: usize, remaining: usize },

    #[error("barrier angle phi = {0} is outside [0, pi/2]")]
    InvalidPhi(f64),

    #[error("tunneling amplitude alpha = {0} is outside [0, 1]")]
    InvalidAlpha(f64),

    #[error("eigenvector denominator alpha - beta e^(-ik) vanishes at k = {k}")]
    DegenerateEigenvectors { k: f64 },

    #[error("quadrature node k = {k} lands on a vanishing denominator")]
    QuadratureNodeSingular { k: f64 },

    #[error(
        "phi = {0} is within 1e-9 of pi/4, where the closed-form eigenvectors are singular; \
         use the simulation path instead"
    )]
    SingularParameterization(f64),

    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),

    #[error("insufficient data for regression: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("slope {slope} is outside [0, 1/sqrt(2)] beyond tolerance; the barrier model does not apply")]
    SlopeOutOfRange { slope: f64 },

    #[error("distribution is not normalized: total probability {0}")]
    NotNormalized(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid continuous-time walk configuration: {0}")]
    InvalidConfig(String),
}
