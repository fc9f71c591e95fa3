//! Graded vector spaces with a declared valid degree window, and graded maps.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{check_range, DegreeRange, LinError};
use crate::sparse::{SparseMatrix, SparseVec};

/// Per-degree finite bases of string labels, sorted lexicographically.
///
/// Degrees inside `valid` that carry no labels are known to be zero; degrees
/// outside `valid` are unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVectorSpace {
    valid: DegreeRange,
    bases: BTreeMap<i64, Vec<String>>,
    index: BTreeMap<i64, HashMap<String, usize>>,
}

impl GradedVectorSpace {
    /// Labels are sorted per degree. Fails on duplicates or on labels placed
    /// outside the valid window.
    pub fn new<I>(valid: DegreeRange, parts: I) -> Result<Self, LinError>
    where
        I: IntoIterator<Item = (i64, Vec<String>)>,
    {
        let mut bases: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for (deg, labels) in parts {
            if labels.is_empty() {
                continue;
            }
            check_range((deg, deg), valid)?;
            bases.entry(deg).or_default().extend(labels);
        }
        let mut index = BTreeMap::new();
        for (deg, labels) in bases.iter_mut() {
            labels.sort();
            let mut map = HashMap::with_capacity(labels.len());
            for (i, l) in labels.iter().enumerate() {
                if map.insert(l.clone(), i).is_some() {
                    return Err(LinError::DuplicateLabel {
                        degree: *deg,
                        label: l.clone(),
                    });
                }
            }
            index.insert(*deg, map);
        }
        Ok(GradedVectorSpace {
            valid,
            bases,
            index,
        })
    }

    pub fn zero(valid: DegreeRange) -> Self {
        GradedVectorSpace {
            valid,
            bases: BTreeMap::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn valid_range(&self) -> DegreeRange {
        self.valid
    }

    pub fn is_valid(&self, degree: i64) -> bool {
        self.valid.0 <= degree && degree <= self.valid.1
    }

    pub fn dim(&self, degree: i64) -> Result<usize, LinError> {
        check_range((degree, degree), self.valid)?;
        Ok(self.bases.get(&degree).map_or(0, |b| b.len()))
    }

    pub fn labels(&self, degree: i64) -> Result<&[String], LinError> {
        check_range((degree, degree), self.valid)?;
        Ok(self.bases.get(&degree).map_or(&[][..], |b| &b[..]))
    }

    pub fn index_of(&self, degree: i64, label: &str) -> Option<usize> {
        self.index.get(&degree)?.get(label).copied()
    }

    /// Degrees with a nonempty basis.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.bases.keys().copied()
    }
}

/// How a map of complexes is meant to interact with the differentials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRule {
    /// `d ∘ f = f ∘ d`
    Commutes,
    /// `d ∘ f = −f ∘ d`
    Anticommutes,
}

/// Map sending degree `n` of the source to degree `n + shift` of the target.
#[derive(Clone, Debug)]
pub struct GradedLinearMap {
    source: Arc<GradedVectorSpace>,
    target: Arc<GradedVectorSpace>,
    shift: i64,
    /// Source degrees on which the matrices are known.
    valid: DegreeRange,
    matrices: BTreeMap<i64, SparseMatrix>,
    rule: SignRule,
}

impl GradedLinearMap {
    /// Missing degrees inside `valid` are zero matrices; shapes are checked.
    pub fn new(
        source: Arc<GradedVectorSpace>,
        target: Arc<GradedVectorSpace>,
        shift: i64,
        valid: DegreeRange,
        matrices: BTreeMap<i64, SparseMatrix>,
        rule: SignRule,
    ) -> Result<Self, LinError> {
        check_range(valid, source.valid_range())?;
        check_range((valid.0 + shift, valid.1 + shift), target.valid_range())?;
        let mut full = BTreeMap::new();
        for n in valid.0..=valid.1 {
            let (c, r) = (source.dim(n)?, target.dim(n + shift)?);
            let m = match matrices.get(&n) {
                Some(m) => m.clone(),
                None => SparseMatrix::zero(r, c),
            };
            if m.rows() != r || m.cols() != c {
                return Err(LinError::DimensionMismatch {
                    degree: n,
                    detail: format!("expected {r}×{c}, got {}×{}", m.rows(), m.cols()),
                });
            }
            full.insert(n, m);
        }
        for k in matrices.keys() {
            check_range((*k, *k), valid)?;
        }
        Ok(GradedLinearMap {
            source,
            target,
            shift,
            valid,
            matrices: full,
            rule,
        })
    }

    pub fn identity(space: Arc<GradedVectorSpace>) -> Self {
        let valid = space.valid_range();
        let matrices = (valid.0..=valid.1)
            .map(|n| (n, SparseMatrix::identity(space.dim(n).unwrap_or(0))))
            .collect();
        GradedLinearMap {
            source: space.clone(),
            target: space,
            shift: 0,
            valid,
            matrices,
            rule: SignRule::Commutes,
        }
    }

    pub fn zero(
        source: Arc<GradedVectorSpace>,
        target: Arc<GradedVectorSpace>,
        shift: i64,
        valid: DegreeRange,
        rule: SignRule,
    ) -> Result<Self, LinError> {
        Self::new(source, target, shift, valid, BTreeMap::new(), rule)
    }

    pub fn source(&self) -> &Arc<GradedVectorSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedVectorSpace> {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn rule(&self) -> SignRule {
        self.rule
    }

    pub fn valid_range(&self) -> DegreeRange {
        self.valid
    }

    /// Matrix on source degree `n`.
    pub fn matrix(&self, n: i64) -> Result<&SparseMatrix, LinError> {
        check_range((n, n), self.valid)?;
        Ok(&self.matrices[&n])
    }

    pub fn apply(&self, n: i64, v: &SparseVec) -> Result<SparseVec, LinError> {
        Ok(self.matrix(n)?.apply(v))
    }

    /// `self ∘ other`, on the source degrees where both are known.
    pub fn compose(&self, other: &GradedLinearMap) -> Result<GradedLinearMap, LinError> {
        let lo = other.valid.0.max(self.valid.0 - other.shift);
        let hi = other.valid.1.min(self.valid.1 - other.shift);
        let mut matrices = BTreeMap::new();
        for n in lo..=hi {
            matrices.insert(n, self.matrix(n + other.shift)?.compose(other.matrix(n)?));
        }
        let rule = if self.rule == other.rule {
            SignRule::Commutes
        } else {
            SignRule::Anticommutes
        };
        GradedLinearMap::new(
            other.source.clone(),
            self.target.clone(),
            self.shift + other.shift,
            (lo, hi),
            matrices,
            rule,
        )
    }
}
