use exactlin::LinError;
use gla_free::LieError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("not a free extension: {0}; replace the map by a cofibration (free map) first")]
    NotAFreeExtension(String),
    #[error("the vanishing condition is not closed under {operation}: {witness}")]
    NotClosed { operation: String, witness: String },
    #[error("not an element of this derivation complex: {0}")]
    NotInComplex(String),
    #[error("operation not available for {0} derivations")]
    Unsupported(String),
}

impl From<LinError> for DerError {
    fn from(e: LinError) -> Self {
        DerError::Lie(LieError::Lin(e))
    }
}

impl DerError {
    pub fn is_range_error(&self) -> bool {
        matches!(self, DerError::Lie(e) if e.is_range_error())
    }
}
