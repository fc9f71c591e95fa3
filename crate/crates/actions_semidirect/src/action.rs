//! Outer actions `(α, ξ)` of one dg Lie algebra on another.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use derivations::DerivationComplex;
use exactlin::{Rational, SparseVec};
use gla_free::{ConnectiveCover, DgLieAlgebra, FreeGradedLie, LawCheck};
use rayon::prelude::*;

use crate::error::ActionError;

/// `α(x, a)` for `x` of degree `p` and `a` of degree `q`, in degree `p + q`.
pub type ActFn = Arc<dyn Fn(i64, &SparseVec, i64, &SparseVec) -> Result<SparseVec, ActionError> + Send + Sync>;
/// `ξ(x)` for `x` of degree `p`, in degree `p − 1`.
pub type XiFn = Arc<dyn Fn(i64, &SparseVec) -> Result<SparseVec, ActionError> + Send + Sync>;

/// An outer action of `g` on `l`: `α: g⊗L → L` of degree 0 (written `x.a`)
/// and `ξ: g → L` of degree −1.
///
/// Both algebras are taken to be zero below their lowest valid degree.
pub struct OuterAction<G, L> {
    g: Arc<G>,
    l: Arc<L>,
    act: ActFn,
    xi: XiFn,
}

impl<G, L> Clone for OuterAction<G, L> {
    fn clone(&self) -> Self {
        OuterAction {
            g: self.g.clone(),
            l: self.l.clone(),
            act: self.act.clone(),
            xi: self.xi.clone(),
        }
    }
}

impl<G, L> fmt::Debug for OuterAction<G, L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("OuterAction")
    }
}

impl<G: DgLieAlgebra + Send, L: DgLieAlgebra + Send> OuterAction<G, L> {
    pub fn new(g: Arc<G>, l: Arc<L>, act: ActFn, xi: XiFn) -> Self {
        OuterAction { g, l, act, xi }
    }

    /// `α = 0`, `ξ = 0`.
    pub fn trivial(g: Arc<G>, l: Arc<L>) -> Self {
        OuterAction {
            g,
            l,
            act: Arc::new(|_, _, _, _| Ok(SparseVec::new())),
            xi: Arc::new(|_, _| Ok(SparseVec::new())),
        }
    }

    pub fn acting(&self) -> &Arc<G> {
        &self.g
    }

    pub fn target(&self) -> &Arc<L> {
        &self.l
    }

    pub fn act_fn(&self) -> &ActFn {
        &self.act
    }

    pub fn xi_fn(&self) -> &XiFn {
        &self.xi
    }

    /// Same `α`, new `ξ`.
    pub fn with_xi(&self, xi: XiFn) -> Self {
        OuterAction { xi, ..self.clone() }
    }

    /// Same `ξ`, new `α`.
    pub fn with_act(&self, act: ActFn) -> Self {
        OuterAction { act, ..self.clone() }
    }

    /// `x.a`; zero when the output degree lies below `L`.
    pub fn act(&self, p: i64, x: &SparseVec, q: i64, a: &SparseVec) -> Result<SparseVec, ActionError> {
        if x.is_zero() || a.is_zero() || p + q < self.l.valid_range().0 {
            return Ok(SparseVec::new());
        }
        (self.act)(p, x, q, a)
    }

    /// `ξ(x)`; zero when `p − 1` lies below `L`.
    pub fn xi(&self, p: i64, x: &SparseVec) -> Result<SparseVec, ActionError> {
        if x.is_zero() || p - 1 < self.l.valid_range().0 {
            return Ok(SparseVec::new());
        }
        (self.xi)(p, x)
    }
}

/// Verdicts for axioms (I)–(V), in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<LawCheck>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.checks.iter().find(|c| !c.holds)
    }

    /// `Err(AxiomViolation)` carrying the first failing axiom.
    pub fn into_result(self) -> Result<(), ActionError> {
        match self.first_failure() {
            None => Ok(()),
            Some(c) => Err(ActionError::AxiomViolation {
                axiom: c.law.clone(),
                witness: c.witness.clone().unwrap_or_default(),
            }),
        }
    }
}

type Cell = (i64, usize);

fn in_range<A: DgLieAlgebra + ?Sized>(a: &A, n: i64) -> bool {
    let (lo, hi) = a.valid_range();
    lo <= n && n <= hi
}

fn cells<A: DgLieAlgebra + ?Sized>(a: &A, hi: i64) -> Result<Vec<Cell>, ActionError> {
    let (lo, top) = a.valid_range();
    let mut out = Vec::new();
    for n in lo..=top.min(hi) {
        for i in 0..a.dim(n)? {
            out.push((n, i));
        }
    }
    Ok(out)
}

pub(crate) fn d_or_zero<A: DgLieAlgebra + ?Sized>(a: &A, n: i64, x: &SparseVec) -> Result<SparseVec, ActionError> {
    if x.is_zero() || n <= a.valid_range().0 || !in_range(a, n) {
        Ok(SparseVec::new())
    } else {
        Ok(a.differential(n, x)?)
    }
}

pub(crate) fn bracket_or_zero<A: DgLieAlgebra + ?Sized>(
    a: &A,
    p: i64,
    x: &SparseVec,
    q: i64,
    y: &SparseVec,
) -> Result<SparseVec, ActionError> {
    if x.is_zero() || y.is_zero() || p + q < a.valid_range().0 {
        Ok(SparseVec::new())
    } else {
        Ok(a.bracket(p, x, q, y)?)
    }
}

fn label<A: DgLieAlgebra + ?Sized>(a: &A, c: Cell) -> String {
    a.basis_label(c.0, c.1)
}

fn collect(law: &str, results: Vec<Result<Option<String>, ActionError>>) -> Result<LawCheck, ActionError> {
    let checked = results.len();
    let mut witness = None;
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

fn unit(c: Cell) -> SparseVec {
    SparseVec::unit(c.1)
}

/// Checks the five axioms on basis elements whose combined degree in `L` is
/// at most `up_to`:
///
/// * (I) `[x,y].a = x.(y.a) − (−1)^{|x||y|} y.(x.a)`
/// * (II) `x.[a,b] = [x.a,b] + (−1)^{|x||a|}[a,x.b]`
/// * (III) `dξ = −ξd`
/// * (IV) `ξ[x,y] = −(−1)^{|y||ξ(x)|} y.ξ(x) + (−1)^{|x|} x.ξ(y)`
/// * (V) `d(x.a) = d(x).a + (−1)^{|x|} x.d(a) + [ξ(x),a]`
pub fn check_outer_axioms<G, L>(a: &OuterAction<G, L>, up_to: i64) -> Result<AxiomReport, ActionError>
where
    G: DgLieAlgebra + Send,
    L: DgLieAlgebra + Send,
{
    let g = a.g.as_ref();
    let l = a.l.as_ref();
    let top = up_to.min(l.valid_range().1);
    let l_lo = l.valid_range().0;
    let gc = cells(g, top - l_lo)?;
    let lc = cells(l, top)?;
    let ok_l = |n: i64| n <= top;

    // (I)
    let mut triples = Vec::new();
    for &x in &gc {
        for &y in &gc {
            if !in_range(g, x.0 + y.0) {
                continue;
            }
            for &b in &lc {
                let t = x.0 + y.0 + b.0;
                if ok_l(t) && t <= l.valid_range().1 && ok_l(x.0 + b.0) && ok_l(y.0 + b.0) {
                    triples.push((x, y, b));
                }
            }
        }
    }
    let one: Vec<_> = triples
        .into_par_iter()
        .map(|(x, y, b)| {
            let (ux, uy, ub) = (unit(x), unit(y), unit(b));
            let xy = bracket_or_zero(g, x.0, &ux, y.0, &uy)?;
            let lhs = a.act(x.0 + y.0, &xy, b.0, &ub)?;
            let yb = a.act(y.0, &uy, b.0, &ub)?;
            let xb = a.act(x.0, &ux, b.0, &ub)?;
            let r1 = a.act(x.0, &ux, y.0 + b.0, &yb)?;
            let r2 = a.act(y.0, &uy, x.0 + b.0, &xb)?;
            let diff = lhs.sub(&r1).add_scaled(&r2, &Rational::sign(x.0 * y.0));
            Ok((!diff.is_zero()).then(|| format!("x = {}, y = {}, a = {}", label(g, x), label(g, y), label(l, b))))
        })
        .collect();

    // (II)
    let mut triples = Vec::new();
    for &x in &gc {
        for &b in &lc {
            for &c in &lc {
                let t = x.0 + b.0 + c.0;
                if ok_l(t) && in_range(l, b.0 + c.0) && ok_l(x.0 + b.0) && ok_l(x.0 + c.0) {
                    triples.push((x, b, c));
                }
            }
        }
    }
    let two: Vec<_> = triples
        .into_par_iter()
        .map(|(x, b, c)| {
            let (ux, ub, uc) = (unit(x), unit(b), unit(c));
            let bc = bracket_or_zero(l, b.0, &ub, c.0, &uc)?;
            let lhs = a.act(x.0, &ux, b.0 + c.0, &bc)?;
            let xb = a.act(x.0, &ux, b.0, &ub)?;
            let xc = a.act(x.0, &ux, c.0, &uc)?;
            let r1 = bracket_or_zero(l, x.0 + b.0, &xb, c.0, &uc)?;
            let r2 = bracket_or_zero(l, b.0, &ub, x.0 + c.0, &xc)?;
            let diff = lhs.sub(&r1).add_scaled(&r2, &-Rational::sign(x.0 * b.0));
            Ok((!diff.is_zero()).then(|| format!("x = {}, a = {}, b = {}", label(g, x), label(l, b), label(l, c))))
        })
        .collect();

    // (III)
    let three: Vec<_> = gc
        .par_iter()
        .filter(|x| ok_l(x.0 - 1))
        .map(|&x| {
            let ux = unit(x);
            let lhs = d_or_zero(l, x.0 - 1, &a.xi(x.0, &ux)?)?;
            let dx = d_or_zero(g, x.0, &ux)?;
            let rhs = a.xi(x.0 - 1, &dx)?;
            Ok((!lhs.add(&rhs).is_zero()).then(|| format!("x = {}", label(g, x))))
        })
        .collect();

    // (IV)
    let mut pairs = Vec::new();
    for &x in &gc {
        for &y in &gc {
            if in_range(g, x.0 + y.0) && ok_l(x.0 + y.0 - 1) {
                pairs.push((x, y));
            }
        }
    }
    let four: Vec<_> = pairs
        .into_par_iter()
        .map(|(x, y)| {
            let (ux, uy) = (unit(x), unit(y));
            let xy = bracket_or_zero(g, x.0, &ux, y.0, &uy)?;
            let lhs = a.xi(x.0 + y.0, &xy)?;
            let xi_x = a.xi(x.0, &ux)?;
            let xi_y = a.xi(y.0, &uy)?;
            let t1 = a.act(y.0, &uy, x.0 - 1, &xi_x)?;
            let t2 = a.act(x.0, &ux, y.0 - 1, &xi_y)?;
            let rhs = t1
                .scale(&-Rational::sign(y.0 * (x.0 - 1)))
                .add_scaled(&t2, &Rational::sign(x.0));
            Ok((lhs != rhs).then(|| format!("x = {}, y = {}", label(g, x), label(g, y))))
        })
        .collect();

    // (V)
    let mut pairs = Vec::new();
    for &x in &gc {
        for &b in &lc {
            if ok_l(x.0 + b.0) {
                pairs.push((x, b));
            }
        }
    }
    let five: Vec<_> = pairs
        .into_par_iter()
        .map(|(x, b)| {
            let (ux, ub) = (unit(x), unit(b));
            let xb = a.act(x.0, &ux, b.0, &ub)?;
            let lhs = d_or_zero(l, x.0 + b.0, &xb)?;
            let dx = d_or_zero(g, x.0, &ux)?;
            let db = d_or_zero(l, b.0, &ub)?;
            let t1 = a.act(x.0 - 1, &dx, b.0, &ub)?;
            let t2 = a.act(x.0, &ux, b.0 - 1, &db)?;
            let xi_x = a.xi(x.0, &ux)?;
            let t3 = bracket_or_zero(l, x.0 - 1, &xi_x, b.0, &ub)?;
            let rhs = t1.add_scaled(&t2, &Rational::sign(x.0)).add(&t3);
            Ok((lhs != rhs).then(|| format!("x = {}, a = {}", label(g, x), label(l, b))))
        })
        .collect();

    Ok(AxiomReport {
        checks: vec![
            collect("(I) bracket compatibility", one)?,
            collect("(II) Leibniz in L", two)?,
            collect("(III) dξ = −ξd", three)?,
            collect("(IV) twisted cocycle identity", four)?,
            collect("(V) differential compatibility", five)?,
        ],
    })
}

/// `Der(L)⟨1⟩`.
pub type DerCover = ConnectiveCover<Arc<DerivationComplex>>;

/// `θ(a)` for `θ` in `Der(L)⟨1⟩` of degree `p` and `a ∈ L_q`.
pub(crate) fn apply_cover(
    cover: &DerCover,
    l: &FreeGradedLie,
    p: i64,
    theta: &SparseVec,
    q: i64,
    a: &SparseVec,
) -> Result<SparseVec, ActionError> {
    let der = cover.inner();
    let inner = cover.include(p, theta);
    let img = der.apply(p, &inner, &l.element(q, a)?)?;
    Ok(l.coordinates_unchecked(&img)?)
}

/// The action of `Der(L)⟨1⟩` on `L` by evaluation, `α(θ, x) = θ(x)`, `ξ = 0`.
pub fn derivation_action(cover: Arc<DerCover>) -> OuterAction<DerCover, FreeGradedLie> {
    let l = cover.inner().target().clone();
    let (c, t) = (cover.clone(), l.clone());
    let act: ActFn = Arc::new(move |p, x, q, a| apply_cover(&c, &t, p, x, q, a));
    OuterAction::new(cover, l, act, Arc::new(|_, _| Ok(SparseVec::new())))
}

/// Degree-preserving linear map `g → L` given on basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearImages {
    pub images: BTreeMap<i64, Vec<SparseVec>>,
}

impl LinearImages {
    pub fn apply(&self, n: i64, x: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        if let Some(cols) = self.images.get(&n) {
            for (i, c) in x.iter() {
                acc = acc.add_scaled(&cols[i], c);
            }
        }
        acc
    }
}

/// The inner action through `f: g → L`: `x.a = [f(x), a]` and
/// `ξ = d∘f − f∘d`. It is an outer action when `f` preserves brackets.
pub fn inner_action<G: DgLieAlgebra + Send + 'static>(
    g: Arc<G>,
    l: Arc<FreeGradedLie>,
    f: LinearImages,
) -> OuterAction<G, FreeGradedLie> {
    let f = Arc::new(f);
    let (lf, ff) = (l.clone(), f.clone());
    let act: ActFn = Arc::new(move |p, x, q, a| Ok(lf.bracket_coords(p, &ff.apply(p, x), q, a)?));
    let (gx, lx) = (g.clone(), l.clone());
    let xi: XiFn = Arc::new(move |p, x| {
        let fx = f.apply(p, x);
        let dfx = d_or_zero(lx.as_ref(), p, &fx)?;
        let dx = d_or_zero(gx.as_ref(), p, x)?;
        Ok(dfx.sub(&f.apply(p - 1, &dx)))
    });
    OuterAction::new(g, l, act, xi)
}
