use ce_convolution::CeError;
use derivations::DerError;
use exactlin::LinError;
use gla_free::LieError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Der(#[from] DerError),
    #[error(transparent)]
    Ce(#[from] CeError),
    #[error("outer action axiom {axiom} fails: {witness}")]
    AxiomViolation { axiom: String, witness: String },
    #[error("not a morphism of dg Lie algebras: {0}")]
    NotAMorphism(String),
    #[error("not a chain map in degree {degree} (at {label})")]
    NotAChainMap { degree: i64, label: String },
    #[error("not a free extension; replace the map by a cofibration (free map) first")]
    NotAFreeExtension,
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
}

impl From<LinError> for ActionError {
    fn from(e: LinError) -> Self {
        match e {
            LinError::NotAChainMap { degree, label } => ActionError::NotAChainMap { degree, label },
            other => ActionError::Lie(LieError::Lin(other)),
        }
    }
}

impl ActionError {
    pub fn is_range_error(&self) -> bool {
        match self {
            ActionError::Lie(e) => e.is_range_error(),
            ActionError::Der(e) => e.is_range_error(),
            ActionError::Ce(e) => e.is_range_error(),
            _ => false,
        }
    }
}

pub(crate) fn lie_err(e: ActionError) -> LieError {
    match e {
        ActionError::Lie(e) => e,
        other => LieError::InvalidModel(other.to_string()),
    }
}
