use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value at node {node} (z = {z})")]
    Evaluation { node: usize, z: Complex64 },
    #[error("point {z} is outside the domain: {reason}")]
    Domain { z: Complex64, reason: String },
    #[error("evaluation at a pole ({z})")]
    Pole { z: Complex64 },
    #[error("ill-conditioned problem: {0}")]
    Conditioning(String),
    #[error("vortex collision at t = {time}")]
    Collision { time: f64 },
    #[error("map has vanishing derivative")]
    SingularMap,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("linear solver failure: {0}")]
    Solver(String),
    #[error("square-root branch lost along path to {z}")]
    Branch { z: Complex64 },
    #[error("function not admissible for this kernel: {0}")]
    Admissibility(String),
    #[error("normalization check failed: {0}")]
    Normalization(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Parameter(format!("non-finite point {z}")))
    }
}
