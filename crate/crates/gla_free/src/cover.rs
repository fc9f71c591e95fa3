//! Connective covers of dg Lie algebras and their underlying complexes.

use std::collections::BTreeMap;
use std::sync::Arc;

use exactlin::{kernel_with_free_columns, ChainComplex, DegreeRange, GradedVectorSpace, SparseMatrix, SparseVec};
use rayon::prelude::*;

use crate::error::LieError;
use crate::structure::DgLieAlgebra;

impl<T: DgLieAlgebra + ?Sized> DgLieAlgebra for &T {
    fn valid_range(&self) -> DegreeRange {
        (**self).valid_range()
    }
    fn dim(&self, n: i64) -> Result<usize, LieError> {
        (**self).dim(n)
    }
    fn basis_label(&self, n: i64, i: usize) -> String {
        (**self).basis_label(n, i)
    }
    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        (**self).differential(n, x)
    }
    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        (**self).bracket(p, x, q, y)
    }
}

impl<T: DgLieAlgebra + ?Sized + Send> DgLieAlgebra for Arc<T> {
    fn valid_range(&self) -> DegreeRange {
        (**self).valid_range()
    }
    fn dim(&self, n: i64) -> Result<usize, LieError> {
        (**self).dim(n)
    }
    fn basis_label(&self, n: i64, i: usize) -> String {
        (**self).basis_label(n, i)
    }
    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        (**self).differential(n, x)
    }
    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        (**self).bracket(p, x, q, y)
    }
}

/// Matrix of `d` on degree `n` (columns are images of basis vectors).
pub fn differential_matrix<A: DgLieAlgebra + ?Sized>(a: &A, n: i64) -> Result<SparseMatrix, LieError> {
    let rows = if n > a.valid_range().0 { a.dim(n - 1)? } else { 0 };
    let cols = (0..a.dim(n)?)
        .into_par_iter()
        .map(|i| {
            if rows == 0 {
                Ok(SparseVec::new())
            } else {
                a.differential(n, &SparseVec::unit(i))
            }
        })
        .collect::<Result<Vec<_>, LieError>>()?;
    Ok(SparseMatrix::from_columns(rows, cols))
}

/// The underlying chain complex on the valid range. Basis order follows the
/// algebra; labels must be unique per degree.
pub fn underlying_complex<A: DgLieAlgebra + ?Sized>(a: &A) -> Result<ChainComplex, LieError> {
    let (lo, hi) = a.valid_range();
    let mut parts = Vec::new();
    for n in lo..=hi {
        parts.push((n, (0..a.dim(n)?).map(|i| a.basis_label(n, i)).collect::<Vec<_>>()));
    }
    let space = GradedVectorSpace::new((lo, hi), parts)?;
    // permutation from algebra order to sorted label order
    let perm = |n: i64| -> Vec<usize> {
        (0..a.dim(n).unwrap_or(0))
            .map(|i| space.index_of(n, &a.basis_label(n, i)).expect("label present"))
            .collect()
    };
    let perms: BTreeMap<i64, Vec<usize>> = (lo..=hi).map(|n| (n, perm(n))).collect();
    let mut d = BTreeMap::new();
    for n in (lo + 1)..=hi {
        let m = differential_matrix(a, n)?;
        let (pr, pc) = (&perms[&(n - 1)], &perms[&n]);
        let mut cols = vec![SparseVec::new(); m.cols()];
        for (j, col) in m.columns().iter().enumerate() {
            cols[pc[j]] = col.reindex(|i| Some(pr[i]));
        }
        d.insert(n, SparseMatrix::from_columns(m.rows(), cols));
    }
    Ok(ChainComplex::new(space, d)?)
}

/// `A⟨k⟩`: zero below `k`, the cycles in degree `k`, `A` above.
pub struct ConnectiveCover<A> {
    inner: A,
    k: i64,
    cycles: Vec<SparseVec>,
    free_cols: Vec<usize>,
}

impl<A: DgLieAlgebra> ConnectiveCover<A> {
    pub fn new(inner: A, k: i64) -> Result<Self, LieError> {
        let (lo, _) = inner.valid_range();
        let (free_cols, cycles) = if k <= lo {
            let dim = inner.dim(k.max(lo)).unwrap_or(0);
            ((0..dim).collect(), (0..dim).map(SparseVec::unit).collect())
        } else {
            kernel_with_free_columns(&differential_matrix(&inner, k)?)
        };
        Ok(ConnectiveCover {
            inner,
            k,
            cycles,
            free_cols,
        })
    }

    pub fn inner(&self) -> &A {
        &self.inner
    }

    pub fn bottom(&self) -> i64 {
        self.k
    }

    /// Cycles of the inner algebra forming the basis in the bottom degree.
    pub fn cycles(&self) -> &[SparseVec] {
        &self.cycles
    }

    /// Coordinates in the inner algebra.
    pub fn include(&self, n: i64, x: &SparseVec) -> SparseVec {
        if n == self.k {
            let mut acc = SparseVec::new();
            for (i, c) in x.iter() {
                acc = acc.add_scaled(&self.cycles[i], c);
            }
            acc
        } else {
            x.clone()
        }
    }

    /// Coordinates of an inner element in the cover; `None` if it is not there.
    pub fn restrict(&self, n: i64, x: &SparseVec) -> Option<SparseVec> {
        if n < self.k {
            return x.is_zero().then(SparseVec::new);
        }
        if n > self.k {
            return Some(x.clone());
        }
        let coords = SparseVec::from_entries(
            self.free_cols.iter().enumerate().map(|(k, &f)| (k, x.get(f))),
        );
        (self.include(n, &coords) == *x).then_some(coords)
    }
}

impl<A: DgLieAlgebra> DgLieAlgebra for ConnectiveCover<A> {
    fn valid_range(&self) -> DegreeRange {
        (self.k - 1, self.inner.valid_range().1)
    }

    fn dim(&self, n: i64) -> Result<usize, LieError> {
        let (lo, hi) = self.valid_range();
        if n < lo || n > hi {
            return Err(LieError::range((n, n), (lo, hi)));
        }
        if n < self.k {
            Ok(0)
        } else if n == self.k {
            Ok(self.cycles.len())
        } else {
            self.inner.dim(n)
        }
    }

    fn basis_label(&self, n: i64, i: usize) -> String {
        if n == self.k {
            let w = self.cycles.len().to_string().len();
            format!("z{:0w$}", i, w = w)
        } else {
            self.inner.basis_label(n, i)
        }
    }

    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        if n <= self.k || x.is_zero() {
            return Ok(SparseVec::new());
        }
        let y = self.inner.differential(n, x)?;
        self.restrict(n - 1, &y)
            .ok_or_else(|| LieError::InvalidModel(format!("boundary in degree {} is not a cycle", n - 1)))
    }

    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        if x.is_zero() || y.is_zero() {
            return Ok(SparseVec::new());
        }
        let z = self
            .inner
            .bracket(p, &self.include(p, x), q, &self.include(q, y))?;
        self.restrict(p + q, &z).ok_or_else(|| {
            LieError::InvalidModel(format!("bracket in degree {} leaves the cover", p + q))
        })
    }
}
