use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate direction: argument vector is zero")]
    DegenerateDirection,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("singular matrix")]
    Singular,

    #[error("wind too strong: F(x, -W(x)) = {value} violates F(x, -W) < 1 at x = {at:?}")]
    WindTooStrong { value: f64, at: Vec<f64> },

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("{what} did not converge (residual {residual:e})")]
    NonConvergence { what: &'static str, residual: f64 },

    #[error("chart degeneracy: tangent vectors are rank deficient at u = {0:?}")]
    ChartDegeneracy(Vec<f64>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("invalid anisotropic norm: {0}")]
    InvalidNorm(String),

    #[error("orientation error: induced volume density {0} is not positive")]
    Orientation(f64),

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("deformation step too large: {0}")]
    StepTooLarge(String),

    #[error("invalid metric description: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
