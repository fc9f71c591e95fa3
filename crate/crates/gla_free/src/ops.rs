//! Derived constructions: indecomposables, lower central series, covers.

use std::collections::BTreeMap;

use exactlin::{ChainComplex, GradedVectorSpace, RowEchelon, SparseMatrix, SparseVec};
use rayon::prelude::*;

use crate::algebra::FreeGradedLie;
use crate::error::{check_degree, LieError};

/// The `n`-connected cover: degree `n` replaced by the cycles, lower degrees
/// dropped.
pub fn truncate(c: &ChainComplex, n: i64) -> Result<ChainComplex, LieError> {
    Ok(c.connective_cover(n)?.0)
}

/// `Q(L) = L/[L,L]` with the induced differential. In a free Lie algebra
/// the decomposables are spanned by the basis brackets of length ≥ 2, so `Q`
/// is spanned by the generators and `d` keeps only linear parts.
pub fn indecomposables(l: &FreeGradedLie) -> Result<ChainComplex, LieError> {
    let top = l.cutoff();
    let gens: BTreeMap<i64, Vec<usize>> = (0..=top)
        .map(|n| {
            let idx: Vec<usize> = (0..l.dim(n).unwrap_or(0))
                .filter(|&i| l.bracket_length(n, i) == 1)
                .collect();
            (n, idx)
        })
        .collect();
    let parts = gens.iter().map(|(n, idx)| {
        let labels: Vec<String> = idx.iter().map(|&i| l.label(*n, i).to_string()).collect();
        (*n, labels)
    });
    let space = GradedVectorSpace::new((0, top), parts)?;
    let mut d = BTreeMap::new();
    for n in 1..=top {
        let full = l.d_matrix(n)?;
        let rows = &gens[&(n - 1)];
        let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let cols = gens[&n]
            .iter()
            .map(|&j| full.column(j).reindex(|r| row_pos.get(&r).copied()))
            .collect();
        d.insert(n, SparseMatrix::from_columns(rows.len(), cols));
    }
    Ok(ChainComplex::new(space, d)?)
}

/// Per-degree bases (reduced echelon form, in Lie coordinates) of the lower
/// central series stage `Γ^k L`, with `Γ^0 = L` and `Γ^{k+1} = [Γ^k, L]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcsStage {
    pub stage: usize,
    pub max_degree: i64,
    pub spaces: BTreeMap<i64, Vec<SparseVec>>,
}

impl LcsStage {
    pub fn dim(&self, n: i64) -> usize {
        self.spaces.get(&n).map_or(0, |v| v.len())
    }
}

/// Computed honestly from brackets, degree by degree, up to `max_degree`.
pub fn lcs_stage(l: &FreeGradedLie, k: usize, max_degree: i64) -> Result<LcsStage, LieError> {
    check_degree(max_degree, l.valid_range())?;
    let mut spaces: BTreeMap<i64, Vec<SparseVec>> = (1..=max_degree)
        .map(|n| {
            let dim = l.dim(n).unwrap_or(0);
            (n, (0..dim).map(SparseVec::unit).collect())
        })
        .collect();
    for _ in 0..k {
        let prev = spaces;
        spaces = (1..=max_degree)
            .into_par_iter()
            .map(|n| {
                let mut spanning = Vec::new();
                for p in 1..n {
                    for x in &prev[&p] {
                        for j in 0..l.dim(n - p)? {
                            let v = l.bracket_coords(p, x, n - p, &SparseVec::unit(j))?;
                            if !v.is_zero() {
                                spanning.push(v);
                            }
                        }
                    }
                }
                let ech = RowEchelon::reduced(&spanning, l.dim(n)?);
                Ok((n, ech.rows().iter().map(|(_, r)| r.clone()).collect()))
            })
            .collect::<Result<_, LieError>>()?;
    }
    Ok(LcsStage {
        stage: k,
        max_degree,
        spaces,
    })
}
