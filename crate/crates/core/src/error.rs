use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the range where the requested formula or series is valid.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("leading y-coefficient vanishes at x = {x_re} + {x_im}i")]
    LeadingCoefficientVanishes { x_re: f64, x_im: f64 },

    #[error("integrand returned a non-finite value at {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("{op} did not converge: {detail}")]
    NonConvergence { op: &'static str, detail: String },

    /// A computed invariant contradicts the configured data (e.g. a bad-prime
    /// trace outside {-1, 0, 1}).
    #[error("structural error: {0}")]
    Structural(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn non_convergence(op: &'static str, detail: impl Into<String>) -> Self {
        Error::NonConvergence {
            op,
            detail: detail.into(),
        }
    }
}
