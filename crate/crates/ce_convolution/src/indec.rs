use std::collections::BTreeMap;
use std::sync::Arc;

use exactlin::{induced_map_on_homology, GradedLinearMap, SignRule, SparseMatrix, SparseVec};
use gla_free::{indecomposables, FreeGradedLie, LieError};

use crate::coalgebra::build_ce;
use crate::error::CeError;

/// Comparison of `H_{p+1}(C̄L)` with `H_p(Q L)` in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndecVerdict {
    pub degree: i64,
    pub ce_dim: usize,
    pub indecomposables_dim: usize,
    pub iso: bool,
}

/// Checks that `C̄L → sL → sQ(L)` induces `H_{p+1}(C̄L) ≅ H_p(QL)` for `p` in
/// `range` (`p ≥ 1`).
pub fn indecomposables_comparison(
    l: Arc<FreeGradedLie>,
    range: (i64, i64),
) -> Result<Vec<IndecVerdict>, CeError> {
    let (lo, hi) = range;
    if lo < 1 || hi + 1 > l.cutoff() {
        return Err(LieError::range((lo - 1, hi + 1), (1, l.cutoff())).into());
    }
    let ce = build_ce(l.clone(), hi + 2, true)?;
    let q = indecomposables(&l)?;
    let mut matrices = BTreeMap::new();
    for m in 1..=(hi + 2) {
        let rows = q.dim(m - 1)?;
        let cols = (0..ce.dim(m)?)
            .map(|i| match ce.desuspension((m, i)) {
                Some((n, b)) if l.bracket_length(n, b) == 1 => {
                    let k = q.space().index_of(n, l.label(n, b)).expect("generator label");
                    SparseVec::unit(k)
                }
                _ => SparseVec::new(),
            })
            .collect();
        matrices.insert(m, SparseMatrix::from_columns(rows, cols));
    }
    let f = GradedLinearMap::new(
        ce.complex().space().clone(),
        q.space().clone(),
        -1,
        (1, hi + 2),
        matrices,
        SignRule::Anticommutes,
    )?;
    let induced = induced_map_on_homology(&f, ce.complex(), &q, lo + 1, hi + 1)?;
    Ok(induced
        .degrees
        .into_iter()
        .map(|d| IndecVerdict {
            degree: d.degree - 1,
            ce_dim: d.source_dim,
            indecomposables_dim: d.target_dim,
            iso: d.iso,
        })
        .collect())
}
