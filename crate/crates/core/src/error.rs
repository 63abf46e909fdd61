use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("chain length {sites} outside supported range 1..={max}")]
    Size { sites: usize, max: usize },

    #[error("site {site} out of range for a {sites}-site chain (sites are 1-based)")]
    SiteIndex { site: usize, sites: usize },

    #[error("operator construction failed: {0}")]
    Construction(String),

    #[error("operator mixes fermion parity sectors at entry ({row}, {col})")]
    SymmetryViolation { row: usize, col: usize },

    #[error("dimension {dimension} exceeds the dense solver cap of {cap}")]
    Capacity { dimension: usize, cap: usize },

    #[error("eigensolver failed on a {dimension}x{dimension} matrix: {reason}")]
    Solver { dimension: usize, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("particle-hole pairing failed: {0}")]
    Structure(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("right eigenvectors were not computed for this spectrum")]
    MissingVectors,
}

impl Error {
    /// Capacity errors are recoverable per grid point; everything else is a hard failure.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}
