//! `Der(L)⟨1⟩ ⋉^{ad} sL` and the correspondence between outer actions on
//! `L` and dg Lie maps into it.

use std::collections::BTreeMap;
use std::sync::Arc;

use derivations::{adjoint, DerivationComplex, DerivationKind};
use exactlin::{DegreeRange, Rational, SparseVec};
use gla_free::{ConnectiveCover, DgLieAlgebra, FreeGradedLie, LawCheck, LieError};
use rayon::prelude::*;

use crate::action::{apply_cover, bracket_or_zero, check_outer_axioms, d_or_zero, ActFn, DerCover, OuterAction, XiFn};
use crate::error::{lie_err, ActionError};

/// `Der(L)⟨1⟩ ⋉^{ad} sL` with
/// `[(θ,sx),(φ,sy)] = ([θ,φ], (−1)^{|θ|} sθ(y) − (−1)^{|φ||x|} sφ(x))` and
/// `∂(θ,sx) = (Dθ + ad_x, −s dx)`.
///
/// Degree `n` holds `Der(L)⟨1⟩_n` followed by `L_{n−1}`.
pub struct AdjointSemidirect {
    cover: Arc<DerCover>,
    valid: DegreeRange,
}

impl AdjointSemidirect {
    /// `der` must be the full derivation complex of its target.
    pub fn new(der: Arc<DerivationComplex>) -> Result<Self, ActionError> {
        if der.kind() != DerivationKind::Full {
            return Err(ActionError::Incompatible("need the full derivation complex".into()));
        }
        let hi = der.valid_range().1.min(der.target().cutoff() + 1);
        let cover = Arc::new(ConnectiveCover::new(der, 1)?);
        Ok(AdjointSemidirect { cover, valid: (0, hi) })
    }

    pub fn cover(&self) -> &Arc<DerCover> {
        &self.cover
    }

    pub fn derivations(&self) -> &Arc<DerivationComplex> {
        self.cover.inner()
    }

    pub fn base(&self) -> &Arc<FreeGradedLie> {
        self.cover.inner().target()
    }

    fn check(&self, n: i64) -> Result<(), ActionError> {
        if n < self.valid.0 || n > self.valid.1 {
            return Err(LieError::range((n, n), self.valid).into());
        }
        Ok(())
    }

    fn der_dim(&self, n: i64) -> Result<usize, ActionError> {
        Ok(if n < 1 { 0 } else { self.cover.dim(n)? })
    }

    fn l_dim(&self, n: i64) -> Result<usize, ActionError> {
        Ok(if n < 1 { 0 } else { self.base().dim(n - 1)? })
    }

    pub fn split(&self, n: i64, v: &SparseVec) -> Result<(SparseVec, SparseVec), ActionError> {
        self.check(n)?;
        let k = self.der_dim(n)?;
        Ok((v.reindex(|i| (i < k).then_some(i)), v.reindex(|i| (i >= k).then(|| i - k))))
    }

    pub fn join(&self, n: i64, theta: &SparseVec, x: &SparseVec) -> Result<SparseVec, ActionError> {
        self.check(n)?;
        let k = self.der_dim(n)?;
        Ok(theta.add(&x.reindex(|i| Some(i + k))))
    }

    /// `ad_x` for `x ∈ L_{n−1}`, in `Der(L)⟨1⟩_{n−1}`.
    fn ad(&self, n: i64, x: &SparseVec) -> Result<SparseVec, ActionError> {
        if x.is_zero() || n - 1 < 1 {
            return Ok(SparseVec::new());
        }
        let l = self.base();
        let ad = adjoint(self.derivations(), &l.element(n - 1, x)?)?;
        self.cover
            .restrict(n - 1, &ad)
            .ok_or_else(|| ActionError::NotAMorphism(format!("ad of a degree {} element is not a cycle", n - 1)))
    }

    pub fn differential(&self, n: i64, v: &SparseVec) -> Result<SparseVec, ActionError> {
        self.check(n)?;
        if n <= self.valid.0 || v.is_zero() {
            return Ok(SparseVec::new());
        }
        let (theta, x) = self.split(n, v)?;
        let der = self.derivations();
        let mut first = SparseVec::new();
        if n > 1 {
            let inner = der.differential(n, &self.cover.include(n, &theta))?;
            let inner = self.cover.restrict(n - 1, &inner).ok_or_else(|| {
                ActionError::NotAMorphism(format!("boundary in degree {} is not a cycle", n - 1))
            })?;
            first = inner.add(&self.ad(n, &x)?);
        }
        let second = if n - 2 >= 0 {
            d_or_zero(self.base().as_ref(), n - 1, &x)?.neg()
        } else {
            SparseVec::new()
        };
        self.join(n - 1, &first, &second)
    }

    pub fn bracket(&self, p: i64, u: &SparseVec, q: i64, v: &SparseVec) -> Result<SparseVec, ActionError> {
        self.check(p + q)?;
        let (theta, x) = self.split(p, u)?;
        let (phi, y) = self.split(q, v)?;
        let first = if p >= 1 && q >= 1 {
            bracket_or_zero(self.cover.as_ref(), p, &theta, q, &phi)?
        } else {
            SparseVec::new()
        };
        let l = self.base();
        let mut second = SparseVec::new();
        if !theta.is_zero() && !y.is_zero() {
            let ty = apply_cover(&self.cover, l, p, &theta, q - 1, &y)?;
            second = second.add_scaled(&ty, &Rational::sign(p));
        }
        if !phi.is_zero() && !x.is_zero() {
            let fx = apply_cover(&self.cover, l, q, &phi, p - 1, &x)?;
            second = second.add_scaled(&fx, &-Rational::sign(q * (p - 1)));
        }
        self.join(p + q, &first, &second)
    }
}

impl DgLieAlgebra for AdjointSemidirect {
    fn valid_range(&self) -> DegreeRange {
        self.valid
    }

    fn dim(&self, n: i64) -> Result<usize, LieError> {
        self.check(n).map_err(lie_err)?;
        Ok(self.der_dim(n).map_err(lie_err)? + self.l_dim(n).map_err(lie_err)?)
    }

    fn basis_label(&self, n: i64, i: usize) -> String {
        let k = self.der_dim(n).unwrap_or(0);
        if i < k {
            format!("({}, 0)", self.cover.basis_label(n, i))
        } else {
            format!("(0, s{})", self.base().label(n - 1, i - k))
        }
    }

    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        AdjointSemidirect::differential(self, n, x).map_err(lie_err)
    }

    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        AdjointSemidirect::bracket(self, p, x, q, y).map_err(lie_err)
    }
}

/// A degree-preserving linear map between dg Lie algebras, as images of basis
/// elements per source degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DgLieMap {
    pub images: BTreeMap<i64, Vec<SparseVec>>,
}

impl DgLieMap {
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

/// `f∘d = d∘f` on basis elements of degree at most `chain_up_to` and
/// `f[x,y] = [fx, fy]` on basis pairs of total degree at most
/// `bracket_up_to`, wherever `f` is defined.
pub fn check_lie_map<S, T>(
    src: &S,
    tgt: &T,
    f: &DgLieMap,
    chain_up_to: i64,
    bracket_up_to: i64,
) -> Result<Vec<LawCheck>, ActionError>
where
    S: DgLieAlgebra + ?Sized,
    T: DgLieAlgebra + ?Sized,
{
    let up_to = chain_up_to.max(bracket_up_to);
    let known = |n: i64| f.images.contains_key(&n) && n <= up_to;
    let mut cells = Vec::new();
    for (&n, cols) in &f.images {
        if n <= up_to {
            cells.extend((0..cols.len()).map(|i| (n, i)));
        }
    }
    let chain: Vec<Result<Option<String>, ActionError>> = cells
        .par_iter()
        .filter(|c| c.0 <= chain_up_to && (known(c.0 - 1) || c.0 - 1 < tgt.valid_range().0))
        .map(|&(n, i)| {
            let x = SparseVec::unit(i);
            let lhs = f.apply(n - 1, &d_or_zero(src, n, &x)?);
            let rhs = d_or_zero(tgt, n, &f.apply(n, &x))?;
            Ok((lhs != rhs).then(|| format!("d fails to commute on {} (degree {n})", src.basis_label(n, i))))
        })
        .collect();
    let mut pairs = Vec::new();
    for &x in &cells {
        for &y in &cells {
            if known(x.0 + y.0) && x.0 + y.0 <= bracket_up_to {
                pairs.push((x, y));
            }
        }
    }
    let brackets: Vec<Result<Option<String>, ActionError>> = pairs
        .into_par_iter()
        .map(|(x, y)| {
            let (ux, uy) = (SparseVec::unit(x.1), SparseVec::unit(y.1));
            let lhs = f.apply(x.0 + y.0, &bracket_or_zero(src, x.0, &ux, y.0, &uy)?);
            let rhs = bracket_or_zero(tgt, x.0, &f.apply(x.0, &ux), y.0, &f.apply(y.0, &uy))?;
            Ok((lhs != rhs).then(|| {
                format!(
                    "bracket not preserved on {}, {}",
                    src.basis_label(x.0, x.1),
                    src.basis_label(y.0, y.1)
                )
            }))
        })
        .collect();
    let law = |name: &str, results: Vec<Result<Option<String>, ActionError>>| -> Result<LawCheck, ActionError> {
        let checked = results.len();
        let mut witness = None;
        for r in results {
            if let Some(w) = r? {
                witness.get_or_insert(w);
            }
        }
        Ok(LawCheck {
            law: name.into(),
            holds: witness.is_none(),
            checked,
            witness,
        })
    };
    Ok(vec![law("chain map", chain)?, law("bracket preserving", brackets)?])
}

/// `x ↦ (α(x, −), −sξ(x))`, checked to be a dg Lie map on degrees up to
/// `up_to`. Fails with `AxiomViolation` if the axioms do not hold.
pub fn action_to_morphism<G>(
    a: &OuterAction<G, FreeGradedLie>,
    target: &AdjointSemidirect,
    up_to: i64,
) -> Result<DgLieMap, ActionError>
where
    G: DgLieAlgebra + Send,
{
    let l = a.target();
    if !Arc::ptr_eq(l, target.base()) && l.generators() != target.base().generators() {
        return Err(ActionError::Incompatible("the action is not on the base of the target".into()));
    }
    check_outer_axioms(a, up_to)?.into_result()?;
    let g = a.acting();
    let (glo, ghi) = g.valid_range();
    let (tlo, thi) = target.valid_range();
    let der = target.derivations();
    for n in glo..1 {
        if g.dim(n)? > 0 {
            return Err(ActionError::Incompatible(format!("acting algebra is nonzero in degree {n}")));
        }
    }
    let mut images = BTreeMap::new();
    for n in glo.max(tlo)..=ghi.min(thi).min(up_to) {
        let mut cols = Vec::with_capacity(g.dim(n)?);
        for i in 0..g.dim(n)? {
            let x = SparseVec::unit(i);
            let mut theta = SparseVec::new();
            if n >= 1 {
                let mut values = Vec::new();
                for (j, name) in l.generator_names().iter().enumerate() {
                    let dj = l.letter_degrees()[j];
                    if n + dj > l.cutoff() {
                        continue;
                    }
                    let gen = l.coordinates(&l.generator_at(j))?;
                    let img = a.act(n, &x, dj, &gen)?;
                    values.push((name.clone(), l.element(n + dj, &img)?));
                }
                let full = der.from_values(n, values)?;
                theta = target.cover().restrict(n, &full).ok_or_else(|| {
                    ActionError::NotAMorphism(format!("α({}, −) is not a cycle", g.basis_label(n, i)))
                })?;
            }
            let xi = if n >= 1 { a.xi(n, &x)?.neg() } else { SparseVec::new() };
            cols.push(target.join(n, &theta, &xi)?);
        }
        images.insert(n, cols);
    }
    let f = DgLieMap { images };
    let checks = check_lie_map(g.as_ref(), target, &f, up_to, up_to)?;
    if let Some(c) = checks.iter().find(|c| !c.holds) {
        return Err(ActionError::NotAMorphism(c.witness.clone().unwrap_or_default()));
    }
    Ok(f)
}

/// The inverse correspondence: `α(x, a) = θ_x(a)` and `ξ(x) = −x_L` for
/// `ψ(x) = (θ_x, s x_L)`.
pub fn morphism_to_action<G>(
    g: Arc<G>,
    target: Arc<AdjointSemidirect>,
    psi: DgLieMap,
) -> OuterAction<G, FreeGradedLie>
where
    G: DgLieAlgebra + Send,
{
    let psi = Arc::new(psi);
    let (t, f) = (target.clone(), psi.clone());
    let act: ActFn = Arc::new(move |p, x, q, a| {
        let (theta, _) = t.split(p, &f.apply(p, x))?;
        if theta.is_zero() {
            return Ok(SparseVec::new());
        }
        apply_cover(t.cover(), t.base(), p, &theta, q, a)
    });
    let t = target.clone();
    let xi: XiFn = Arc::new(move |p, x| Ok(t.split(p, &psi.apply(p, x))?.1.neg()));
    OuterAction::new(g, target.base().clone(), act, xi)
}
