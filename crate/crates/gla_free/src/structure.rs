//! Dg Lie algebras given on finite per-degree bases, and exact checkers for
//! the graded sign laws.

use exactlin::{DegreeRange, Rational, SparseVec};
use rayon::prelude::*;

use crate::algebra::FreeGradedLie;
use crate::error::LieError;

/// A dg Lie algebra with finite bases on `valid_range()`.
///
/// The differential on the lowest valid degree is taken to be zero; brackets
/// whose degree falls outside the valid range are not evaluated.
pub trait DgLieAlgebra: Sync {
    fn valid_range(&self) -> DegreeRange;
    fn dim(&self, n: i64) -> Result<usize, LieError>;
    fn basis_label(&self, n: i64, i: usize) -> String;
    /// `d` on coordinates of degree `n`, landing in degree `n − 1`.
    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError>;
    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError>;
}

impl DgLieAlgebra for FreeGradedLie {
    fn valid_range(&self) -> DegreeRange {
        FreeGradedLie::valid_range(self)
    }

    fn dim(&self, n: i64) -> Result<usize, LieError> {
        FreeGradedLie::dim(self, n)
    }

    fn basis_label(&self, n: i64, i: usize) -> String {
        self.label(n, i).to_string()
    }

    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        self.d_coords(n, x)
    }

    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        self.bracket_coords(p, x, q, y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub holds: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl LawCheck {
    fn from_results(law: &str, results: Vec<Result<Option<String>, LieError>>) -> Result<Self, LieError> {
        let mut witness = None;
        let checked = results.len();
        for r in results {
            if let Some(w) = r? {
                witness.get_or_insert(w);
            }
        }
        Ok(LawCheck {
            law: law.to_string(),
            holds: witness.is_none(),
            checked,
            witness,
        })
    }
}

type Cell = (i64, usize);

fn cells<A: DgLieAlgebra + ?Sized>(a: &A, lo: i64, hi: i64) -> Result<Vec<Cell>, LieError> {
    let mut out = Vec::new();
    for n in lo..=hi {
        for i in 0..a.dim(n)? {
            out.push((n, i));
        }
    }
    Ok(out)
}

fn window<A: DgLieAlgebra + ?Sized>(a: &A, up_to: i64) -> (i64, i64) {
    let (lo, hi) = a.valid_range();
    (lo, hi.min(up_to))
}

fn name<A: DgLieAlgebra + ?Sized>(a: &A, c: Cell) -> String {
    format!("{} (degree {})", a.basis_label(c.0, c.1), c.0)
}

fn d_or_zero<A: DgLieAlgebra + ?Sized>(a: &A, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
    if n <= a.valid_range().0 {
        Ok(SparseVec::new())
    } else {
        a.differential(n, x)
    }
}

fn bracket_or_zero<A: DgLieAlgebra + ?Sized>(
    a: &A,
    p: i64,
    x: &SparseVec,
    q: i64,
    y: &SparseVec,
) -> Result<SparseVec, LieError> {
    let (lo, hi) = a.valid_range();
    if x.is_zero() || y.is_zero() || p < lo || q < lo || p + q < lo || p + q > hi {
        Ok(SparseVec::new())
    } else {
        a.bracket(p, x, q, y)
    }
}

/// `d∘d = 0` on every basis element of degree ≤ `up_to`.
pub fn check_d_squared<A: DgLieAlgebra + ?Sized>(a: &A, up_to: i64) -> Result<LawCheck, LieError> {
    let (lo, hi) = window(a, up_to);
    let results = cells(a, lo, hi)?
        .into_par_iter()
        .map(|c| {
            let x = SparseVec::unit(c.1);
            let dx = d_or_zero(a, c.0, &x)?;
            let ddx = d_or_zero(a, c.0 - 1, &dx)?;
            Ok((!ddx.is_zero()).then(|| format!("d∘d ≠ 0 on {}", name(a, c))))
        })
        .collect();
    LawCheck::from_results("d∘d = 0", results)
}

/// `[x,y] = −(−1)^{|x||y|}[y,x]` on basis pairs with total degree ≤ `up_to`.
pub fn check_antisymmetry<A: DgLieAlgebra + ?Sized>(a: &A, up_to: i64) -> Result<LawCheck, LieError> {
    let (lo, hi) = window(a, up_to);
    let all = cells(a, lo, a.valid_range().1)?;
    let mut pairs = Vec::new();
    for (k, &x) in all.iter().enumerate() {
        for &y in &all[k..] {
            let s = x.0 + y.0;
            if s >= lo && s <= hi {
                pairs.push((x, y));
            }
        }
    }
    let results = pairs
        .into_par_iter()
        .map(|(x, y)| {
            let (ux, uy) = (SparseVec::unit(x.1), SparseVec::unit(y.1));
            let xy = a.bracket(x.0, &ux, y.0, &uy)?;
            let yx = a.bracket(y.0, &uy, x.0, &ux)?;
            let sum = xy.add_scaled(&yx, &Rational::sign(x.0 * y.0));
            Ok((!sum.is_zero()).then(|| {
                format!("antisymmetry fails on {}, {}", name(a, x), name(a, y))
            }))
        })
        .collect();
    LawCheck::from_results("graded antisymmetry", results)
}

/// `(−1)^{|x||z|}[x,[y,z]] + (−1)^{|y||x|}[y,[z,x]] + (−1)^{|z||y|}[z,[x,y]] = 0`
/// on basis triples `x ≤ y ≤ z` (in basis order) of total degree ≤ `up_to`.
/// Other orderings follow from antisymmetry, which is checked separately.
pub fn check_jacobi<A: DgLieAlgebra + ?Sized>(a: &A, up_to: i64) -> Result<LawCheck, LieError> {
    let (lo, hi) = window(a, up_to);
    let (vlo, vhi) = a.valid_range();
    let all = cells(a, vlo, vhi)?;
    let ok = |s: i64| s >= vlo && s <= vhi;
    let mut triples = Vec::new();
    for (i, &x) in all.iter().enumerate() {
        for (j, &y) in all.iter().enumerate().skip(i) {
            if !ok(x.0 + y.0) {
                continue;
            }
            for &z in &all[j..] {
                let s = x.0 + y.0 + z.0;
                if s >= lo && s <= hi && ok(y.0 + z.0) && ok(x.0 + z.0) {
                    triples.push((x, y, z));
                }
            }
        }
    }
    let results = triples
        .into_par_iter()
        .map(|(x, y, z)| {
            let (ux, uy, uz) = (SparseVec::unit(x.1), SparseVec::unit(y.1), SparseVec::unit(z.1));
            let yz = a.bracket(y.0, &uy, z.0, &uz)?;
            let zx = a.bracket(z.0, &uz, x.0, &ux)?;
            let xy = a.bracket(x.0, &ux, y.0, &uy)?;
            let t1 = bracket_or_zero(a, x.0, &ux, y.0 + z.0, &yz)?;
            let t2 = bracket_or_zero(a, y.0, &uy, z.0 + x.0, &zx)?;
            let t3 = bracket_or_zero(a, z.0, &uz, x.0 + y.0, &xy)?;
            let sum = t1
                .scale(&Rational::sign(x.0 * z.0))
                .add_scaled(&t2, &Rational::sign(y.0 * x.0))
                .add_scaled(&t3, &Rational::sign(z.0 * y.0));
            Ok((!sum.is_zero()).then(|| {
                format!("Jacobi fails on {}, {}, {}", name(a, x), name(a, y), name(a, z))
            }))
        })
        .collect();
    LawCheck::from_results("graded Jacobi", results)
}

/// `d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]` on basis pairs of total degree ≤ `up_to`.
pub fn check_leibniz<A: DgLieAlgebra + ?Sized>(a: &A, up_to: i64) -> Result<LawCheck, LieError> {
    let (lo, hi) = window(a, up_to);
    let all = cells(a, a.valid_range().0, a.valid_range().1)?;
    let mut pairs = Vec::new();
    for &x in &all {
        for &y in &all {
            let s = x.0 + y.0;
            if s >= lo && s <= hi {
                pairs.push((x, y));
            }
        }
    }
    let results = pairs
        .into_par_iter()
        .map(|(x, y)| {
            let (ux, uy) = (SparseVec::unit(x.1), SparseVec::unit(y.1));
            let xy = a.bracket(x.0, &ux, y.0, &uy)?;
            let lhs = d_or_zero(a, x.0 + y.0, &xy)?;
            let dx = d_or_zero(a, x.0, &ux)?;
            let dy = d_or_zero(a, y.0, &uy)?;
            let r1 = bracket_or_zero(a, x.0 - 1, &dx, y.0, &uy)?;
            let r2 = bracket_or_zero(a, x.0, &ux, y.0 - 1, &dy)?;
            let diff = lhs.sub(&r1).add_scaled(&r2, &-Rational::sign(x.0));
            Ok((!diff.is_zero()).then(|| {
                format!("Leibniz fails on {}, {}", name(a, x), name(a, y))
            }))
        })
        .collect();
    LawCheck::from_results("Leibniz", results)
}

/// All four sign-law checks.
pub fn check_dg_lie_laws<A: DgLieAlgebra + ?Sized>(a: &A, up_to: i64) -> Result<Vec<LawCheck>, LieError> {
    Ok(vec![
        check_d_squared(a, up_to)?,
        check_antisymmetry(a, up_to)?,
        check_jacobi(a, up_to)?,
        check_leibniz(a, up_to)?,
    ])
}
