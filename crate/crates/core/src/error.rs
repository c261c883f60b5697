use thiserror::Error;

use crate::stieltjes::ExpansionResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series did not reach its truncation tolerance within the term cap.
    #[error("{what} did not converge after {terms} terms (partial value {partial:e})")]
    NonConvergence {
        what: &'static str,
        partial: f64,
        terms: usize,
    },

    /// The naive finite-part series of a transform hit `k_max`; the partial
    /// decomposition is still available.
    #[error("expansion did not converge after {} terms (partial total {:e})", .0.k_used, .0.total)]
    ExpansionNonConvergence(Box<ExpansionResult>),

    #[error("f(x) x^-{order} is not integrable at infinity")]
    DivergentAtInfinity { order: f64 },

    #[error("zero order undetermined: first {0} coefficients are all zero")]
    IndeterminateOrder(usize),

    #[error("quadrature hit its subdivision limit (estimate {value:e}, error {abs_err:e})")]
    QuadratureLimit { value: f64, abs_err: f64 },

    #[error("cannot parse function `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors that stem from a truncation or subdivision cap rather
    /// than invalid input.
    pub fn is_nonconvergence(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::ExpansionNonConvergence(_) | Error::QuadratureLimit { .. }
        )
    }
}
