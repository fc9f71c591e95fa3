use derivations::DerError;
use exactlin::LinError;
use gla_free::LieError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CeError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Der(#[from] DerError),
    #[error("Maurer-Cartan equation fails on {word}: {detail}")]
    MCViolation { word: String, detail: String },
    #[error("not a Maurer-Cartan element: {0}")]
    NotMaurerCartan(String),
    #[error("the algebra has a generator in degree {0}; a connected algebra is required")]
    NotConnected(i64),
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
}

impl From<LinError> for CeError {
    fn from(e: LinError) -> Self {
        CeError::Lie(LieError::Lin(e))
    }
}

impl CeError {
    pub fn is_range_error(&self) -> bool {
        match self {
            CeError::Lie(e) => e.is_range_error(),
            CeError::Der(e) => e.is_range_error(),
            _ => false,
        }
    }
}
