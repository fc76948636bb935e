use num_complex::Complex64;

/// Errors raised by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("|z| = {0} exceeds 30, plain Airy values would overflow; use airy_scaled")]
    AiryArgumentTooLarge(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("t = {t} lies on the branch cut; limit from one side {side_a}, from the other {side_b}")]
    OnCut {
        t: Complex64,
        side_a: Complex64,
        side_b: Complex64,
    },
    #[error("path blocked at {at} (relief level {level})")]
    PathBlocked { at: Complex64, level: f64 },
    #[error("quadrature did not converge on segment {segment} after {depth} bisections")]
    NoConvergence { segment: usize, depth: usize },
    #[error("trajectory reaches zero at t = {0}")]
    ZeroSample(f64),
    #[error("angular velocity vanishes at theta = {0}; averaging is undefined")]
    SingularAveraging(f64),
    #[error("Jacobian is singular at t = {0}")]
    SingularJacobian(f64),
    #[error("least-squares design is ill-conditioned (condition {0:e}); supply more eps values")]
    IllConditioned(f64),
    #[error("no exit detected before t = {0}")]
    NoExit(f64),
    #[error("no root: {0}")]
    NoRoot(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
