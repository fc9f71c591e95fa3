//! Gauge transport `exp(x).a = a + Σ_{n≥0} θ_x^n(θ_x(a) − ξ(x))/(n+1)!`.

use std::collections::HashMap;
use std::sync::Arc;

use actions_semidirect::OuterAction;
use exactlin::{Rational, SparseVec};
use gla_free::DgLieAlgebra;

use crate::bch::GroupElement;
use crate::error::GaugeError;
use crate::mc::McElement;

/// Sums the series for a degree-0 operator `theta` on degree −1 and the
/// shift `xi`. At most `bound` terms may be nonzero.
pub fn gauge_series(
    theta: impl Fn(&SparseVec) -> Result<SparseVec, GaugeError>,
    xi: &SparseVec,
    a: &SparseVec,
    bound: usize,
) -> Result<SparseVec, GaugeError> {
    let mut v = theta(a)?.sub(xi);
    let mut out = a.clone();
    let mut n = 0;
    while !v.is_zero() {
        if n == bound {
            return Err(GaugeError::NilpotencyBoundExceeded {
                bound,
                detail: format!("term {n} of the gauge series is nonzero"),
            });
        }
        out = out.add_scaled(&v, &Rational::inverse_factorial(n as u32 + 1));
        v = theta(&v)?;
        n += 1;
    }
    Ok(out)
}

/// The adjoint gauge action of `exp(x)` on Maurer–Cartan elements of the
/// same algebra: `θ_x = ad_x` and `ξ(x) = dx = 0`.
pub fn gauge_act<A: DgLieAlgebra>(x: &GroupElement<A>, a: &McElement<A>) -> Result<McElement<A>, GaugeError> {
    if !Arc::ptr_eq(x.ambient(), a.ambient()) {
        return Err(GaugeError::DifferentAmbient);
    }
    let l = a.ambient().as_ref();
    let theta = |v: &SparseVec| -> Result<SparseVec, GaugeError> {
        if v.is_zero() || x.coords().is_zero() {
            Ok(SparseVec::new())
        } else {
            Ok(l.bracket(0, x.coords(), -1, v)?)
        }
    };
    let out = gauge_series(theta, &SparseVec::new(), a.coords(), x.nilpotency())?;
    McElement::new(a.ambient().clone(), out)
}

/// `exp(x).a` for a degree-0 cycle `x` of the acting algebra of an outer
/// action on `a`'s algebra, with `θ_x = x.(−)` and the action's `ξ`.
pub fn outer_gauge_act<G, L>(
    action: &OuterAction<G, L>,
    x: &SparseVec,
    a: &McElement<L>,
    bound: usize,
) -> Result<McElement<L>, GaugeError>
where
    G: DgLieAlgebra + Send,
    L: DgLieAlgebra + Send,
{
    if !Arc::ptr_eq(action.target(), a.ambient()) {
        return Err(GaugeError::DifferentAmbient);
    }
    let g = action.acting().as_ref();
    if g.valid_range().0 < 0 && !g.differential(0, x)?.is_zero() {
        return Err(GaugeError::NotACycle("dx ≠ 0 in the acting algebra".into()));
    }
    let theta = |v: &SparseVec| -> Result<SparseVec, GaugeError> { Ok(action.act(0, x, -1, v)?) };
    let xi = action.xi(0, x)?;
    let out = gauge_series(theta, &xi, a.coords(), bound)?;
    McElement::new(a.ambient().clone(), out)
}

/// Orbits of a finite set of points under a finite set of moves, as a
/// partition. Images outside the set are counted but otherwise ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub blocks: Vec<Vec<usize>>,
    pub block_of: Vec<usize>,
    pub escaped: usize,
}

impl OrbitPartition {
    pub fn same_orbit(&self, i: usize, j: usize) -> bool {
        self.block_of[i] == self.block_of[j]
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Joins `i` and `j` whenever some move sends `points[i]` to `points[j]`.
pub fn orbit_partition(
    points: &[SparseVec],
    images: impl Fn(&SparseVec) -> Result<Vec<SparseVec>, GaugeError>,
) -> Result<OrbitPartition, GaugeError> {
    let index: HashMap<&SparseVec, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..points.len()).collect();
    let mut escaped = 0;
    for (i, p) in points.iter().enumerate() {
        for img in images(p)? {
            match index.get(&img) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
                None => escaped += 1,
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut block_of = vec![0; points.len()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..points.len() {
        let r = find(&mut parent, i);
        let b = match roots.iter().position(|&x| x == r) {
            Some(b) => b,
            None => {
                roots.push(r);
                blocks.push(Vec::new());
                blocks.len() - 1
            }
        };
        blocks[b].push(i);
        block_of[i] = b;
    }
    Ok(OrbitPartition {
        blocks,
        block_of,
        escaped,
    })
}
