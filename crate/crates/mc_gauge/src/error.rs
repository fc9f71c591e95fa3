use actions_semidirect::ActionError;
use gla_free::LieError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaugeError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("not a Maurer–Cartan element: residual has {0}")]
    NotMaurerCartan(String),
    #[error("nilpotency bound {bound} exceeded: {detail}")]
    NilpotencyBoundExceeded { bound: usize, detail: String },
    #[error("class bound {bound} is above the supported maximum {max}")]
    ClassBoundTooLarge { bound: usize, max: usize },
    #[error("expected a degree {expected} element, got degree {found}")]
    WrongDegree { expected: i64, found: i64 },
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("the elements live in different algebras")]
    DifferentAmbient,
}

impl GaugeError {
    pub fn is_range_error(&self) -> bool {
        match self {
            GaugeError::Lie(e) => e.is_range_error(),
            GaugeError::Action(e) => e.is_range_error(),
            _ => false,
        }
    }
}
