use exactlin::{DegreeRange, LinError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("invalid generator name {0:?}")]
    InvalidGeneratorName(String),
    #[error("generator {name} has degree {degree}; generators must have degree ≥ 1")]
    NonPositiveDegree { name: String, degree: i64 },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("{what}: expected degree {expected}, found {found}")]
    DegreeMismatch {
        what: String,
        expected: i64,
        found: i64,
    },
    #[error("{0} does not lie in the free Lie algebra")]
    NotInLieSubspace(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
}

impl LieError {
    pub fn range(requested: DegreeRange, valid: DegreeRange) -> Self {
        LieError::Lin(LinError::DegreeRangeExceeded { requested, valid })
    }

    /// True for errors caused by asking about degrees outside a valid window.
    pub fn is_range_error(&self) -> bool {
        matches!(self, LieError::Lin(LinError::DegreeRangeExceeded { .. }))
    }
}

pub(crate) fn check_degree(n: i64, valid: DegreeRange) -> Result<(), LieError> {
    if n < valid.0 || n > valid.1 {
        Err(LieError::range((n, n), valid))
    } else {
        Ok(())
    }
}
