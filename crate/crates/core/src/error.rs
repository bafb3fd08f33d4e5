use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A principal-curvature factor `c^2 - k^2 s^2` reached zero or went negative.
    #[error("focal radius reached at r = {r} by curvature index {index} (k = {k})")]
    FocalRadius { index: usize, k: f64, r: f64 },

    /// The inputs are inconsistent with each other (dimensions, degree counts, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative solver failed to produce a certified answer.
    #[error("solver failure: {0}")]
    Solver(String),

    /// A quantity that is positive by construction came out nonpositive.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// `true` for errors caused by a radius or argument outside the valid range.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::FocalRadius { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
