//! Maurer–Cartan elements `da + ½[a,a] = 0` in degree −1.

use std::sync::Arc;

use exactlin::{Rational, SparseVec};
use gla_free::{DgLieAlgebra, LieError};

use crate::error::GaugeError;

/// Outcome of [`is_mc`], with the exact residual `da + ½[a,a]` in degree −2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McVerdict {
    pub holds: bool,
    pub residual: SparseVec,
}

fn in_range<A: DgLieAlgebra + ?Sized>(a: &A, n: i64) -> bool {
    let (lo, hi) = a.valid_range();
    lo <= n && n <= hi
}

/// `da + ½[a,a]` for `a` of degree −1. Degree −2 may lie below the
/// algebra, in which case the residual is zero.
pub fn is_mc<A: DgLieAlgebra + ?Sized>(l: &A, a: &SparseVec) -> Result<McVerdict, GaugeError> {
    if !in_range(l, -1) {
        return Err(LieError::range((-1, -1), l.valid_range()).into());
    }
    if !in_range(l, -2) || a.is_zero() {
        return Ok(McVerdict {
            holds: true,
            residual: SparseVec::new(),
        });
    }
    let d = l.differential(-1, a)?;
    let residual = d.add_scaled(&l.bracket(-1, a, -1, a)?, &Rational::new(1, 2));
    Ok(McVerdict {
        holds: residual.is_zero(),
        residual,
    })
}

/// A degree −1 element known to satisfy the Maurer–Cartan equation.
pub struct McElement<A> {
    ambient: Arc<A>,
    coords: SparseVec,
}

impl<A: DgLieAlgebra> McElement<A> {
    pub fn new(ambient: Arc<A>, coords: SparseVec) -> Result<Self, GaugeError> {
        let v = is_mc(ambient.as_ref(), &coords)?;
        if !v.holds {
            let (i, c) = v.residual.leading().expect("nonzero residual");
            return Err(GaugeError::NotMaurerCartan(format!(
                "{c}·{} in degree −2",
                ambient.basis_label(-2, i)
            )));
        }
        Ok(McElement { ambient, coords })
    }

    pub fn zero(ambient: Arc<A>) -> Result<Self, GaugeError> {
        Self::new(ambient, SparseVec::new())
    }

    pub fn ambient(&self) -> &Arc<A> {
        &self.ambient
    }

    pub fn coords(&self) -> &SparseVec {
        &self.coords
    }
}

impl<A> Clone for McElement<A> {
    fn clone(&self) -> Self {
        McElement {
            ambient: self.ambient.clone(),
            coords: self.coords.clone(),
        }
    }
}

impl<A> std::fmt::Debug for McElement<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("McElement").field("coords", &self.coords).finish()
    }
}

impl<A> PartialEq for McElement<A> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) && self.coords == other.coords
    }
}
