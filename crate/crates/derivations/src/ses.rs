use std::collections::BTreeMap;

use exactlin::{kernel, rank, span_rank, SparseMatrix, SparseVec};
use gla_free::LieMorphism;
use rayon::prelude::*;

use crate::builders::{build_der, build_f_der, build_rel_der};
use crate::complex::DerivationComplex;
use crate::error::DerError;

/// Exactness data of `0 → Rel_n → Der_n → Der_f,n → 0` in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeExactness {
    pub degree: i64,
    pub dims: (usize, usize, usize),
    pub injective: bool,
    pub composite_zero: bool,
    pub surjective: bool,
    pub exact_in_middle: bool,
}

impl DegreeExactness {
    pub fn exact(&self) -> bool {
        self.injective && self.composite_zero && self.surjective && self.exact_in_middle
    }
}

/// `Der(L_X ‖ L_A) → Der(L_X) → Der_f(L_A, L_X)` for a free extension `f`.
pub struct RestrictionSes {
    pub relative: DerivationComplex,
    pub full: DerivationComplex,
    pub along: DerivationComplex,
    /// Per source degree, `Rel_n → Der_n`.
    pub inclusion: BTreeMap<i64, SparseMatrix>,
    /// Per source degree, `Der_n → Der_f,n`.
    pub restriction: BTreeMap<i64, SparseMatrix>,
    pub degrees: Vec<DegreeExactness>,
    pub inclusion_is_chain_map: bool,
    pub restriction_is_chain_map: bool,
}

fn dim_or_zero(c: &DerivationComplex, n: i64) -> usize {
    let (lo, hi) = c.valid_range();
    if n < lo || n > hi {
        0
    } else {
        c.dim(n).unwrap_or(0)
    }
}

fn d_or_zero(c: &DerivationComplex, n: i64) -> SparseMatrix {
    let (lo, hi) = c.valid_range();
    if n <= lo || n > hi {
        SparseMatrix::zero(dim_or_zero(c, n - 1), dim_or_zero(c, n))
    } else {
        c.complex().d(n).expect("valid degree").clone()
    }
}

impl RestrictionSes {
    pub fn range(&self) -> (i64, i64) {
        self.full.valid_range()
    }

    pub fn is_exact(&self) -> bool {
        self.degrees.iter().all(|d| d.exact())
    }

    /// Whether restriction stays onto after passing to the degree-1 cycles
    /// of the connective covers; `None` when degree 1 is out of range.
    pub fn truncated_surjective_in_degree_one(&self) -> Option<bool> {
        let (_, hi) = self.range();
        if hi < 1 {
            return None;
        }
        let z_full = kernel(&d_or_zero(&self.full, 1));
        let z_along = kernel(&d_or_zero(&self.along, 1));
        let r = &self.restriction[&1];
        let images: Vec<SparseVec> = z_full.iter().map(|z| r.apply(z)).collect();
        Some(span_rank(&images, dim_or_zero(&self.along, 1)) == z_along.len())
    }
}

/// Builds the three complexes up to `max_degree`, the two maps between them,
/// and checks the chain-map identities and exactness degree by degree.
pub fn restriction_ses(f: &LieMorphism, max_degree: Option<i64>) -> Result<RestrictionSes, DerError> {
    let x = f.target().clone();
    let full = build_der(x, max_degree)?;
    let hi = full.valid_range().1;
    let relative = build_rel_der(f, Some(hi))?;
    let along = build_f_der(f, Some(hi))?;
    let (lo, _) = full.valid_range();

    let inclusion: BTreeMap<i64, SparseMatrix> = (lo..=hi)
        .map(|n| {
            let rows = dim_or_zero(&full, n);
            let cols = (0..dim_or_zero(&relative, n))
                .map(|j| {
                    let label = relative.label(n, j);
                    let i = full
                        .complex()
                        .space()
                        .index_of(n, &label)
                        .expect("relative cell is a full cell");
                    SparseVec::unit(i)
                })
                .collect();
            (n, SparseMatrix::from_columns(rows, cols))
        })
        .collect();

    let source = f.source();
    let target = f.target();
    let restriction: BTreeMap<i64, SparseMatrix> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let cols = (0..dim_or_zero(&full, n))
                .map(|j| {
                    let (alo, ahi) = along.valid_range();
                    if n < alo || n > ahi {
                        return Ok(SparseVec::new());
                    }
                    let images = full.images(n, &SparseVec::unit(j))?;
                    let parts = source
                        .generators()
                        .iter()
                        .enumerate()
                        .map(|(a, g)| Ok(target.derivation_coords(&f.images()[a], g.degree, n, &images)?))
                        .collect::<Result<Vec<_>, DerError>>()?;
                    along.from_slot_coords(n, &parts)
                })
                .collect::<Result<Vec<_>, DerError>>()?;
            Ok((n, SparseMatrix::from_columns(dim_or_zero(&along, n), cols)))
        })
        .collect::<Result<_, DerError>>()?;

    let mut inclusion_is_chain_map = true;
    let mut restriction_is_chain_map = true;
    for n in (lo + 1)..=hi {
        let lhs = d_or_zero(&full, n).compose(&inclusion[&n]);
        let rhs = inclusion[&(n - 1)].compose(&d_or_zero(&relative, n));
        inclusion_is_chain_map &= lhs == rhs;
        let lhs = d_or_zero(&along, n).compose(&restriction[&n]);
        let rhs = restriction[&(n - 1)].compose(&d_or_zero(&full, n));
        restriction_is_chain_map &= lhs == rhs;
    }

    let degrees = (lo..=hi)
        .map(|n| {
            let (r, m, a) = (
                dim_or_zero(&relative, n),
                dim_or_zero(&full, n),
                dim_or_zero(&along, n),
            );
            let inc = &inclusion[&n];
            let res = &restriction[&n];
            let rank_inc = rank(inc);
            let rank_res = rank(res);
            DegreeExactness {
                degree: n,
                dims: (r, m, a),
                injective: rank_inc == r,
                composite_zero: res.compose(inc).is_zero(),
                surjective: rank_res == a,
                exact_in_middle: m - rank_res == rank_inc,
            }
        })
        .collect();

    Ok(RestrictionSes {
        relative,
        full,
        along,
        inclusion,
        restriction,
        degrees,
        inclusion_is_chain_map,
        restriction_is_chain_map,
    })
}
