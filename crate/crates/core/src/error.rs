use thiserror::Error;

use crate::graph::NotAGraph;
use crate::graphio::Graph6Error;
use crate::ratmath::MathError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("matrix is not signable to the requested sign pattern")]
    NotSignable,
    #[error("block system is not compatible: {0}")]
    IncompatibleBlocks(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("matrix has no positive eigenvalue")]
    NoPositiveEigenvalue,
    #[error("matrix has no negative eigenvalue")]
    NoNegativeEigenvalue,
    #[error(transparent)]
    NotAGraph(#[from] NotAGraph),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable name, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Math(e) => e.kind(),
            Error::NotSignable => "NotSignable",
            Error::IncompatibleBlocks(_) => "IncompatibleBlocks",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::NoPositiveEigenvalue => "NoPositiveEigenvalue",
            Error::NoNegativeEigenvalue => "NoNegativeEigenvalue",
            Error::NotAGraph(_) => "NotAGraph",
            Error::Graph6(_) => "ParseError",
            Error::Unsupported(_) => "Unsupported",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
