use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A query point lies beyond the precomputed prime table.
    #[error("{value} is outside the table range [0, {limit}]")]
    Range { value: f64, limit: u64 },

    /// The request would exceed a configured memory or enumeration budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("incomplete factorization of {n}: cofactor {cofactor} may be composite")]
    IncompleteFactorization { n: u64, cofactor: u64 },

    #[error("unsupported tail weight `{0}`: no antiderivative available")]
    UnsupportedWeight(String),

    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (partial estimate {estimate:e}, error estimate {error:e})"
    )]
    NoConvergence {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    /// A log-magnitude left the range of a double.
    #[error("overflow evaluating {0}")]
    Overflow(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("check {check}: non-finite evaluation at {point}")]
    NonFinite { check: String, point: String },

    #[error("sieve cache: {0}")]
    Cache(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors caused by budgets or resources rather than by bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::Resource(_) | Error::Cache(_) | Error::NoConvergence { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Cache(e.to_string())
    }
}
