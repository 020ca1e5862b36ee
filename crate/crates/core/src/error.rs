use thiserror::Error;

use crate::lattice::GroundLattice;
use crate::linalg::Projection;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty spanning set")]
    EmptySpanningSet,

    #[error("jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("the subspace does not contain the identity")]
    MissingIdentity,

    #[error("the cone K(p) is trivial")]
    TrivialCone,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("found {} of {needed} linearly independent exposed rays", .found.len())]
    Incomplete {
        found: Vec<Projection>,
        needed: usize,
    },

    #[error("node budget of {budget} exceeded ({} nodes built)", .partial.nodes.len())]
    BudgetExceeded {
        budget: usize,
        partial: Box<GroundLattice>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}
