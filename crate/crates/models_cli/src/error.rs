use actions_semidirect::ActionError;
use ce_convolution::CeError;
use derivations::DerError;
use exactlin::LinError;
use gla_free::LieError;
use mc_gauge::GaugeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid model file: {0}")]
    InvalidFile(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("unknown suite {0:?}; expected one of {1}")]
    UnknownSuite(String, String),
    #[error("{0} is not a chain map of dg Lie algebras: {1}")]
    NotAMorphism(String, String),
    #[error("{what} = {value} is not a cycle")]
    NotACycle { what: String, value: String },
    #[error(
        "map {0} is not a free extension; the relative derivations only model it after a cofibrant \
         replacement (adjoin generators killing the images, as the boundary example does), or rerun \
         with --vanishing for derivations vanishing on the image"
    )]
    NotAFreeExtension(String),
    #[error("--max-degree {0} exceeds 24; pass --force to run anyway")]
    DegreeTooLarge(i64),
    #[error("degree range: {0}")]
    Range(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Der(#[from] DerError),
    #[error(transparent)]
    Ce(#[from] CeError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<LinError> for CliError {
    fn from(e: LinError) -> Self {
        CliError::Lie(LieError::Lin(e))
    }
}

impl CliError {
    pub fn is_range_error(&self) -> bool {
        match self {
            CliError::Range(_) => true,
            CliError::Lie(e) => e.is_range_error(),
            CliError::Der(e) => e.is_range_error(),
            CliError::Ce(e) => e.is_range_error(),
            CliError::Action(e) => e.is_range_error(),
            CliError::Gauge(e) => e.is_range_error(),
            _ => false,
        }
    }

    /// 3 for degree-range errors, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        if self.is_range_error() {
            3
        } else {
            2
        }
    }
}
