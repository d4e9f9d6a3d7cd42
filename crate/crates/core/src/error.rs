use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no convergence after {iterations} iterations (eigenvalue index {index})")]
    Convergence { iterations: usize, index: usize },

    #[error("matrix is not positive definite (eigenvalue {eigenvalue:e})")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    Inaccurate { residual: f64, tolerance: f64 },

    #[error("divergent integral: combined gaussian exponent {exponent} is not positive")]
    DivergentIntegral { exponent: f64 },

    #[error("function is not normalizable: gaussian exponent {exponent} is not positive")]
    NonNormalizable { exponent: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("truncation too small: tail fraction {tail:e} exceeds {limit:e}")]
    TailContamination { tail: f64, limit: f64 },

    #[error("degenerate state: physical norm is zero")]
    DegenerateState,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("spectrum not converged up to dimension {dim}; unconverged indices {indices:?}")]
    NotConverged { dim: usize, indices: Vec<usize> },
}

impl Error {
    /// True for failures of a numerical kernel, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::Inaccurate { .. }
                | Error::NotConverged { .. }
                | Error::TailContamination { .. }
        )
    }
}
