use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Landau level (n={n}, m={m}): requires n + m >= 0")]
    InvalidLevel { n: usize, m: i64 },

    #[error("truncation error: {what} loses {lost:.3e} of probability (allowed {allowed:.3e})")]
    Truncation { what: &'static str, lost: f64, allowed: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse complex number {0:?}: expected a+bi, a-bi or a plain real")]
    ComplexParse(String),

    #[error("malformed state dump at line {line}: {reason}")]
    Dump { line: usize, reason: String },

    #[error("operator is not Hermitian (max asymmetry {0:.3e})")]
    NonHermitian(f64),

    #[error("post-selection on an outcome with probability {0:.3e}")]
    PostSelection(f64),

    #[error("quadrature did not converge: refinement changed the result by {0:.3e}")]
    QuadratureNotConverged(f64),

    #[error("unitarity drift {0:.3e} exceeds 1e-10")]
    UnitarityDrift(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
