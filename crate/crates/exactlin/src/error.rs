use thiserror::Error;

/// A degree window `[lo, hi]`, both ends inclusive.
pub type DegreeRange = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("degree range [{}, {}] exceeds the valid range [{}, {}]", requested.0, requested.1, valid.0, valid.1)]
    DegreeRangeExceeded {
        requested: DegreeRange,
        valid: DegreeRange,
    },
    #[error("dimension mismatch in degree {degree}: {detail}")]
    DimensionMismatch { degree: i64, detail: String },
    #[error("d∘d ≠ 0 on basis element {label} in degree {degree}")]
    NotAComplex { degree: i64, label: String },
    #[error("not a chain map: discrepancy on basis element {label} in degree {degree}")]
    NotAChainMap { degree: i64, label: String },
    #[error("duplicate basis label {label} in degree {degree}")]
    DuplicateLabel { degree: i64, label: String },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

pub(crate) fn check_range(requested: DegreeRange, valid: DegreeRange) -> Result<(), LinError> {
    if requested.0 < valid.0 || requested.1 > valid.1 {
        Err(LinError::DegreeRangeExceeded { requested, valid })
    } else {
        Ok(())
    }
}
