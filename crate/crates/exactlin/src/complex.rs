//! Chain complexes (differential of degree −1), homology, covers and chain maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::elim::{
    independent_in_order, kernel, kernel_with_free_columns, rank, solve, span_rank,
};
use crate::error::{check_range, DegreeRange, LinError};
use crate::graded::{GradedLinearMap, GradedVectorSpace, SignRule};
use crate::sparse::{SparseMatrix, SparseVec};

/// A complex whose differential `d_n : C_n → C_{n−1}` is known for every `n`
/// with both `n` and `n − 1` in the valid range of the space.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    space: Arc<GradedVectorSpace>,
    differential: GradedLinearMap,
}

impl ChainComplex {
    /// `d[n]` is the matrix of `d_n`; missing degrees are zero. Verifies `d∘d = 0`.
    pub fn new(
        space: GradedVectorSpace,
        d: BTreeMap<i64, SparseMatrix>,
    ) -> Result<Self, LinError> {
        let space = Arc::new(space);
        let (lo, hi) = space.valid_range();
        let differential = if lo < hi {
            GradedLinearMap::new(
                space.clone(),
                space.clone(),
                -1,
                (lo + 1, hi),
                d,
                SignRule::Anticommutes,
            )?
        } else {
            if let Some(k) = d.keys().next() {
                check_range((*k, *k), (lo + 1, hi))?;
            }
            GradedLinearMap::new(
                space.clone(),
                space.clone(),
                -1,
                (lo + 1, lo),
                BTreeMap::new(),
                SignRule::Anticommutes,
            )
            .unwrap_or_else(|_| unreachable!())
        };
        let c = ChainComplex {
            space,
            differential,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<(), LinError> {
        let (lo, hi) = self.space.valid_range();
        for n in (lo + 2)..=hi {
            let dd = self.d(n - 1)?.compose(self.d(n)?);
            if let Some(j) = (0..dd.cols()).find(|&j| !dd.column(j).is_zero()) {
                return Err(LinError::NotAComplex {
                    degree: n,
                    label: self.space.labels(n)?[j].clone(),
                });
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<GradedVectorSpace> {
        &self.space
    }

    pub fn differential(&self) -> &GradedLinearMap {
        &self.differential
    }

    pub fn valid_range(&self) -> DegreeRange {
        self.space.valid_range()
    }

    pub fn dim(&self, n: i64) -> Result<usize, LinError> {
        self.space.dim(n)
    }

    /// `d_n : C_n → C_{n−1}`.
    pub fn d(&self, n: i64) -> Result<&SparseMatrix, LinError> {
        self.differential.matrix(n)
    }

    /// The connective cover: zero below `n`, cycles in degree `n`, unchanged
    /// above. Also returns the inclusion into `self`.
    ///
    /// Covers at or below the lowest valid degree are the identity when that
    /// degree is zero (or lies above `n`); otherwise degree `n − 1` must be known.
    pub fn connective_cover(&self, n: i64) -> Result<(ChainComplex, GradedLinearMap), LinError> {
        let (lo, hi) = self.valid_range();
        if n < lo || (n == lo && self.dim(lo)? == 0) {
            return Ok((self.clone(), GradedLinearMap::identity(self.space.clone())));
        }
        check_range((n - 1, n), (lo, hi))?;
        let (free_cols, cycles) = kernel_with_free_columns(self.d(n)?);
        let new_lo = lo.min(n - 1);
        let width = cycles.len().to_string().len().max(1);
        let mut parts = vec![(
            n,
            (0..cycles.len())
                .map(|i| format!("z{:0w$}", i, w = width))
                .collect::<Vec<_>>(),
        )];
        for m in (n + 1)..=hi {
            parts.push((m, self.space.labels(m)?.to_vec()));
        }
        let space = GradedVectorSpace::new((new_lo, hi), parts)?;
        let mut d = BTreeMap::new();
        if n < hi {
            let top = self.d(n + 1)?;
            let cols = top
                .columns()
                .iter()
                .map(|y| {
                    SparseVec::from_entries(
                        free_cols
                            .iter()
                            .enumerate()
                            .map(|(k, &f)| (k, y.get(f))),
                    )
                })
                .collect();
            d.insert(n + 1, SparseMatrix::from_columns(cycles.len(), cols));
        }
        for m in (n + 2)..=hi {
            d.insert(m, self.d(m)?.clone());
        }
        let cover = ChainComplex::new(space, d)?;
        let mut inc = BTreeMap::new();
        inc.insert(n, SparseMatrix::from_columns(self.dim(n)?, cycles));
        for m in (n + 1)..=hi {
            inc.insert(m, SparseMatrix::identity(self.dim(m)?));
        }
        let inclusion = GradedLinearMap::new(
            cover.space.clone(),
            self.space.clone(),
            0,
            (n, hi),
            inc,
            SignRule::Commutes,
        )?;
        Ok((cover, inclusion))
    }
}

/// Homology in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyDegree {
    pub degree: i64,
    pub dim: usize,
    /// Cycles representing a basis of homology.
    pub representatives: Vec<SparseVec>,
    /// False when an adjacent differential is unknown; `dim` is then meaningless.
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub degrees: Vec<HomologyDegree>,
}

impl HomologyReport {
    pub fn get(&self, n: i64) -> Option<&HomologyDegree> {
        self.degrees.iter().find(|h| h.degree == n)
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.degrees.iter().map(|h| (h.degree, h.dim)).collect()
    }
}

fn homology_at(c: &ChainComplex, n: i64) -> Result<HomologyDegree, LinError> {
    let dn = c.d(n)?;
    let up = c.d(n + 1)?;
    let cycles = kernel(dn);
    let boundary_rank = rank(up);
    let dim = cycles.len() - boundary_rank;
    let representatives = if dim == 0 {
        Vec::new()
    } else {
        let mut rows: Vec<SparseVec> = up.columns().to_vec();
        let nb = rows.len();
        rows.extend(cycles.iter().cloned());
        let flags = independent_in_order(&rows, c.dim(n)?);
        cycles
            .into_iter()
            .zip(&flags[nb..])
            .filter(|(_, f)| **f)
            .map(|(z, _)| z)
            .collect()
    };
    debug_assert_eq!(representatives.len(), dim);
    Ok(HomologyDegree {
        degree: n,
        dim,
        representatives,
        valid: true,
    })
}

/// Exact homology on `[lo, hi]`; needs the complex valid on `[lo−1, hi+1]`.
pub fn homology(c: &ChainComplex, lo: i64, hi: i64) -> Result<HomologyReport, LinError> {
    check_range((lo - 1, hi + 1), c.valid_range())?;
    let degrees: Result<Vec<_>, _> = (lo..=hi)
        .into_par_iter()
        .map(|n| homology_at(c, n))
        .collect();
    Ok(HomologyReport { degrees: degrees? })
}

/// Like [`homology`], but degrees lacking adjacent data are returned with
/// `valid = false` instead of failing.
pub fn homology_clamped(c: &ChainComplex, lo: i64, hi: i64) -> HomologyReport {
    let (vlo, vhi) = c.valid_range();
    let degrees = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            if n > vlo && n < vhi {
                homology_at(c, n).expect("range checked")
            } else {
                HomologyDegree {
                    degree: n,
                    dim: 0,
                    representatives: Vec::new(),
                    valid: false,
                }
            }
        })
        .collect();
    HomologyReport { degrees }
}

/// Betti numbers only (no representatives).
pub fn betti_numbers(c: &ChainComplex, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>, LinError> {
    check_range((lo - 1, hi + 1), c.valid_range())?;
    (lo..=hi)
        .into_par_iter()
        .map(|n| Ok((n, c.dim(n)? - rank(c.d(n)?) - rank(c.d(n + 1)?))))
        .collect()
}

/// Outcome of a chain-map check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapCheck {
    pub holds: bool,
    /// Degrees (of the source) that were checked.
    pub checked: Option<DegreeRange>,
    /// First failure: source degree and basis label.
    pub witness: Option<(i64, String)>,
}

/// Checks `d∘f = ±f∘d` (sign from the map's rule) on every source degree `n`
/// where `f_n`, `f_{n−1}` and both differentials are known.
pub fn verify_chain_map(
    f: &GradedLinearMap,
    src: &ChainComplex,
    tgt: &ChainComplex,
) -> Result<ChainMapCheck, LinError> {
    let (flo, fhi) = f.valid_range();
    let (slo, shi) = src.valid_range();
    let (tlo, thi) = tgt.valid_range();
    let s = f.shift();
    let lo = (flo + 1).max(slo + 1).max(tlo + 1 - s);
    let hi = fhi.min(shi).min(thi - s);
    if lo > hi {
        return Ok(ChainMapCheck {
            holds: true,
            checked: None,
            witness: None,
        });
    }
    for n in lo..=hi {
        let left = tgt.d(n + s)?.compose(f.matrix(n)?);
        let mut right = f.matrix(n - 1)?.compose(src.d(n)?);
        if f.rule() == SignRule::Anticommutes {
            right = right.scale(&-crate::Rational::one());
        }
        let diff = left.sub(&right);
        if let Some(j) = (0..diff.cols()).find(|&j| !diff.column(j).is_zero()) {
            return Ok(ChainMapCheck {
                holds: false,
                checked: Some((lo, hi)),
                witness: Some((n, src.space().labels(n)?[j].clone())),
            });
        }
    }
    Ok(ChainMapCheck {
        holds: true,
        checked: Some((lo, hi)),
        witness: None,
    })
}

/// `H_n(f)` in the representative bases, for one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedDegree {
    pub degree: i64,
    pub source_dim: usize,
    pub target_dim: usize,
    /// `target_dim × source_dim`.
    pub matrix: SparseMatrix,
    pub rank: usize,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub degrees: Vec<InducedDegree>,
}

impl InducedMap {
    pub fn all_iso(&self) -> bool {
        self.degrees.iter().all(|d| d.iso)
    }
}

/// Matrices of `H(f)` on source degrees `[lo, hi]` and an iso verdict per
/// degree certified by the exact rank of that matrix.
pub fn induced_map_on_homology(
    f: &GradedLinearMap,
    src: &ChainComplex,
    tgt: &ChainComplex,
    lo: i64,
    hi: i64,
) -> Result<InducedMap, LinError> {
    let s = f.shift();
    check_range((lo, hi), f.valid_range())?;
    let hs = homology(src, lo, hi)?;
    let ht = homology(tgt, lo + s, hi + s)?;
    let check = verify_chain_map(f, src, tgt)?;
    if let Some((n, label)) = check.witness {
        if (lo..=hi + 1).contains(&n) {
            return Err(LinError::NotAChainMap { degree: n, label });
        }
    }
    let degrees: Result<Vec<_>, LinError> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let reps = &hs.get(n).expect("degree").representatives;
            let reps_t = &ht.get(n + s).expect("degree").representatives;
            let rows = tgt.dim(n + s)?;
            let images: Vec<SparseVec> = reps.iter().map(|z| f.matrix(n).unwrap().apply(z)).collect();
            let basis = SparseMatrix::from_columns(rows, reps_t.clone())
                .hstack(tgt.d(n + s + 1)?);
            let rhs = SparseMatrix::from_columns(rows, images);
            let coords = solve(&basis, &rhs).ok_or_else(|| LinError::NotAChainMap {
                degree: n,
                label: "image of a cycle is not a cycle".to_string(),
            })?;
            let h_t = reps_t.len();
            let cols: Vec<SparseVec> = coords
                .iter()
                .map(|x| x.reindex(|i| (i < h_t).then_some(i)))
                .collect();
            let matrix = SparseMatrix::from_columns(h_t, cols);
            let r = span_rank(matrix.columns(), h_t);
            Ok(InducedDegree {
                degree: n,
                source_dim: reps.len(),
                target_dim: h_t,
                matrix,
                rank: r,
                iso: r == reps.len() && r == h_t,
            })
        })
        .collect();
    Ok(InducedMap { degrees: degrees? })
}
