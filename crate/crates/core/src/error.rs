use thiserror::Error;

/// Errors shared by the algebra kernel, the quadrature engine and the frame
/// machinery.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive (lambda_min = {lambda_min:.6e})")]
    NotPositive { lambda_min: f64 },

    #[error("matrix is singular for a negative power (lambda_min = {lambda_min:.6e})")]
    SingularForNegativePower { lambda_min: f64 },

    #[error("family is not a frame (lambda_min(G) = {lambda_min:.6e})")]
    NotAFrame { lambda_min: f64 },

    #[error("map is not surjective (smallest singular gap {gap:.6e})")]
    NotSurjective { gap: f64 },

    #[error("sampled functions live on different node sets")]
    NodeMismatch,

    #[error("frame families have incompatible forms: {0}")]
    FormMismatch(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid interval: endpoints must satisfy a < b")]
    InvalidInterval,

    #[error("element is not invertible (sigma_min = {sigma_min:.6e})")]
    NotInvertible { sigma_min: f64 },

    #[error("frame bounds must be positive: {0}")]
    NonPositiveBound(String),

    #[error("star-bound mode unavailable: {0}")]
    ModeUnavailable(String),

    #[error("random sampling degenerated: {0}")]
    DegenerateSample(String),
}
