//! Outer actions induced on convolution algebras.

use std::sync::Arc;

use ce_convolution::{pushforward_tau, ConvolutionDgLie, WordValues};
use derivations::{DerivationComplex, DerivationKind};
use exactlin::SparseVec;
use gla_free::{DgLieAlgebra, FreeGradedLie};

use crate::action::{check_outer_axioms, ActFn, DerCover, OuterAction, XiFn};
use crate::error::ActionError;

/// `(x.f)(c) = x.f(c)` and `ξ̃(x)(c) = ε(c)·ξ(x)` on `Hom(C̄, L)`.
///
/// The counit vanishes on the reduced coalgebra, so `ξ̃ = 0`. The input
/// axioms are checked up to `up_to`.
pub fn induced_hom_action<G>(
    a: &OuterAction<G, FreeGradedLie>,
    conv: Arc<ConvolutionDgLie>,
    up_to: i64,
) -> Result<OuterAction<G, ConvolutionDgLie>, ActionError>
where
    G: DgLieAlgebra + Send + 'static,
{
    let x = conv.target();
    if x.generators() != a.target().generators() || x.d_images() != a.target().d_images() {
        return Err(ActionError::Incompatible("the action is not on the convolution's target".into()));
    }
    check_outer_axioms(a, up_to)?.into_result()?;
    let (base, c) = (a.clone(), conv.clone());
    let act: ActFn = Arc::new(move |p, g, q, f| {
        let mut out = WordValues::new();
        for (w, v) in c.values(q, f)? {
            let img = base.act(p, g, w.0 + q, &v)?;
            if !img.is_zero() {
                out.insert(w, img);
            }
        }
        Ok(c.from_values(p + q, &out)?)
    });
    let xi: XiFn = Arc::new(|_, _| Ok(SparseVec::new()));
    Ok(OuterAction::new(a.acting().clone(), conv, act, xi))
}

/// `θ∘f` for `θ ∈ Der(L_X)⟨1⟩` of degree `p` and `f` of degree `q`.
pub(crate) fn derivation_after(
    conv: &ConvolutionDgLie,
    cover: &DerCover,
    p: i64,
    theta: &SparseVec,
    q: i64,
    f: &SparseVec,
) -> Result<SparseVec, ActionError> {
    let x = conv.target();
    let mut out = WordValues::new();
    for (w, v) in conv.values(q, f)? {
        let img = crate::action::apply_cover(cover, x, p, theta, w.0 + q, &v)?;
        if !img.is_zero() {
            out.insert(w, img);
        }
    }
    Ok(conv.from_values(p + q, &out)?)
}

/// `Der(L_X)` in all degrees acting on `Hom(C̄L_A, L_X)` (twisted or not)
/// by `θ.f = θ∘f`, with `ξ = τ_*`. Pass `τ = 0` for the untwisted action.
pub fn derivation_hom_action(
    der: Arc<DerivationComplex>,
    conv: Arc<ConvolutionDgLie>,
    tau: SparseVec,
) -> Result<OuterAction<DerivationComplex, ConvolutionDgLie>, ActionError> {
    let x = conv.target();
    if der.kind() != DerivationKind::Full || x.generators() != der.target().generators() {
        return Err(ActionError::Incompatible("need the full derivation complex of the convolution's target".into()));
    }
    let (d, c) = (der.clone(), conv.clone());
    let act: ActFn = Arc::new(move |p, theta, q, f| {
        let x = c.target();
        let mut out = WordValues::new();
        for (w, v) in c.values(q, f)? {
            let img = d.apply(p, theta, &x.element(w.0 + q, &v)?)?;
            let img = x.coordinates_unchecked(&img)?;
            if !img.is_zero() {
                out.insert(w, img);
            }
        }
        Ok(c.from_values(p + q, &out)?)
    });
    let (d, c) = (der.clone(), conv.clone());
    let xi: XiFn = Arc::new(move |p, theta| Ok(pushforward_tau(&c, &tau, &d, p, theta)?));
    Ok(OuterAction::new(der, conv, act, xi))
}
