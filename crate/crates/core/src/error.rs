use thiserror::Error;

use crate::types::DualSolution;

/// Errors raised by the maximum-entropy toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// `r_i > 0` while `p_i = 0`, so the likelihood is `-inf`.
    #[error("support mismatch at index {index}: r > 0 where p = 0")]
    SupportMismatch { index: usize },

    /// The target is outside (or on the boundary of) the convex hull of
    /// the columns of X, so the dual has no finite minimizer.
    #[error("infeasible target: {0}")]
    InfeasibleTarget(String),

    #[error("degenerate potential: constant potential {value} cannot reach target {target}")]
    DegeneratePotential { value: f64, target: f64 },

    /// The solver ran out of iterations; the best iterate is attached.
    #[error("no convergence after {} iterations (residual {:.3e})", .best.iterations, .best.residual_inf)]
    MaxIterExceeded { best: Box<DualSolution> },

    #[error("enumeration too large: {count} types exceeds cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u128 },

    #[error("no type class of size {n} falls inside the coherence window")]
    NoCoherentType { n: u64 },

    #[error("no grid point falls inside the coherence window")]
    NoFeasiblePoint,

    #[error("invalid range [{lo}, {hi}] with step {step}")]
    InvalidRange { lo: f64, hi: f64, step: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
