use std::path::PathBuf;

use crate::curve::PointConfiguration;

/// Errors raised anywhere in the library.
///
/// Numerical failures carry enough context (last iterate, residual trace) to
/// be written out as diagnostics by the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("residue {r} is not a unit modulo {n}; no such embedding")]
    InvalidEmbedding { r: i64, n: u32 },

    #[error("residue {r} is not a unit modulo {n}; no such automorphism")]
    InvalidAutomorphism { r: i64, n: u32 },

    #[error(
        "insufficient precision: {digits} digits given, at least {required} needed for height bound {height_bound}"
    )]
    InsufficientPrecision { digits: u32, required: u32, height_bound: u64 },

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("path passes within {distance:.3e} of branch point {index} (clearance {clearance:.3e})")]
    PathTooClose { index: usize, distance: f64, clearance: f64 },

    #[error("quadrature failed to reach the requested precision: {0}")]
    PrecisionFailure(String),

    #[error("jacobian is numerically singular (pivot ratio {pivot_ratio:.3e})")]
    SingularJacobian { pivot_ratio: f64 },

    #[error("newton iterate left the open moduli space after {iterations} iterations")]
    DomainExit { last: Box<PointConfiguration>, iterations: usize, trace: Vec<f64> },

    #[error("no convergence after {iterations} iterations (last residual {:.3e})", trace.last().copied().unwrap_or(f64::NAN))]
    NoConvergence { iterations: usize, trace: Vec<f64> },

    #[error("hermitian form is numerically degenerate: {0}")]
    DegenerateForm(String),

    #[error("not certified: {0}")]
    NotCertified(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateConfiguration(msg.into())
    }
}
