//! The relative model `Der(L_X)⟨1⟩ ⋉_{τ_*} Hom^τ(C̄L_A, L_X)⟨0⟩` and its
//! comparison maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use ce_convolution::{build_convolution, pushforward_tau, tau_from_inclusion, ConvolutionDgLie, WordValues};
use derivations::{build_der, build_f_der, build_rel_der, DerivationComplex};
use exactlin::{
    induced_map_on_homology, verify_chain_map, ChainComplex, DegreeRange, GradedLinearMap, InducedMap, Rational,
    SignRule, SparseMatrix, SparseVec,
};
use gla_free::{underlying_complex, ConnectiveCover, DgLieAlgebra, FreeGradedLie, LawCheck, LieError, LieMorphism};
use rayon::prelude::*;

use crate::action::{ActFn, DerCover, OuterAction, XiFn};
use crate::adjoint::{check_lie_map, DgLieMap};
use crate::error::{lie_err, ActionError};
use crate::induced::derivation_after;
use crate::product::TwistedSemidirect;

/// `Hom^τ(C̄L_A, L_X)⟨0⟩`.
pub type HomCover = ConnectiveCover<Arc<ConvolutionDgLie>>;
/// `Der(L_X)⟨1⟩ ⋉_{τ_*} Hom^τ⟨0⟩`.
pub type ModelProduct = TwistedSemidirect<DerCover, HomCover>;
/// `Der(L_X)⟨1⟩ ⋉ Hom` with `ξ = 0` and untwisted `∂`.
type UntwistedProduct = TwistedSemidirect<DerCover, ConvolutionDgLie>;

/// Brackets in the twist identity are compared up to this total degree.
const TWIST_BRACKET_DEGREE: i64 = 4;

pub struct RelativeModel {
    inclusion: LieMorphism,
    der: Arc<DerivationComplex>,
    der1: Arc<DerCover>,
    rel1: Arc<DerCover>,
    fder: Arc<DerivationComplex>,
    conv: Arc<ConvolutionDgLie>,
    twisted: Arc<ConvolutionDgLie>,
    hom0: Arc<HomCover>,
    tau: SparseVec,
    product: ModelProduct,
    complex: ChainComplex,
    twist_identity: Vec<LawCheck>,
}

fn max_letter_degree(l: &FreeGradedLie) -> i64 {
    l.letter_degrees().iter().copied().max().unwrap_or(0)
}

/// Builds the model for a free extension `i: L_A → L_X`, with the
/// coalgebra truncated at word degree `word_cutoff` and all algebras up to
/// `max_degree` (default: as far as the cutoffs allow).
///
/// Checks that `τ = i∘π_A` is Maurer–Cartan and that twisting
/// `Der(L_X)⟨1⟩ ⋉ Hom` by `(0, τ)` gives the product with `ξ = τ_*`: on
/// differentials in every degree, on brackets up to total degree 4.
pub fn build_relative_model(
    i: &LieMorphism,
    word_cutoff: i64,
    max_degree: Option<i64>,
) -> Result<RelativeModel, ActionError> {
    if !i.is_free_extension() {
        return Err(ActionError::NotAFreeExtension);
    }
    let a = i.source().clone();
    let x = i.target().clone();
    if word_cutoff <= max_letter_degree(&a) {
        return Err(ActionError::Incompatible(format!(
            "word cutoff {word_cutoff} must exceed every generator degree of the source"
        )));
    }
    let hi = max_degree.unwrap_or((x.cutoff() - max_letter_degree(&x)).min(x.cutoff() - word_cutoff));
    let der = Arc::new(build_der(x.clone(), Some(hi))?);
    let rel = Arc::new(build_rel_der(i, Some(hi))?);
    let fder_hi = (hi + 1).min(x.cutoff() - max_letter_degree(&a));
    let fder = Arc::new(build_f_der(i, Some(fder_hi))?);
    let conv = Arc::new(build_convolution(a, x, word_cutoff, Some(hi))?);
    let tau = tau_from_inclusion(&conv, i)?;
    let twisted = Arc::new(conv.twist(&tau)?);
    let der1 = Arc::new(ConnectiveCover::new(der.clone(), 1)?);
    let rel1 = Arc::new(ConnectiveCover::new(rel, 1)?);
    let hom0 = Arc::new(ConnectiveCover::new(twisted.clone(), 0)?);

    let (c, h, tw) = (der1.clone(), hom0.clone(), twisted.clone());
    let act: ActFn = Arc::new(move |p, theta, q, f| {
        let inner = h.include(q, f);
        let out = derivation_after(&tw, &c, p, theta, q, &inner)?;
        h.restrict(p + q, &out)
            .ok_or_else(|| ActionError::NotAMorphism(format!("θ∘f leaves the cover in degree {}", p + q)))
    });
    let (c, h, tw, t) = (der1.clone(), hom0.clone(), twisted.clone(), tau.clone());
    let xi: XiFn = Arc::new(move |p, theta| {
        let pushed = pushforward_tau(&tw, &t, c.inner(), p, &c.include(p, theta))?;
        h.restrict(p - 1, &pushed)
            .ok_or_else(|| ActionError::NotAChainMap { degree: p, label: "τ_*θ is not a cycle".into() })
    });
    let action = OuterAction::new(der1.clone(), hom0.clone(), act, xi);
    let product = TwistedSemidirect::new(action);
    let complex = underlying_complex(&product)?;
    let mut model = RelativeModel {
        inclusion: i.clone(),
        der,
        der1,
        rel1,
        fder,
        conv,
        twisted,
        hom0,
        tau,
        product,
        complex,
        twist_identity: Vec::new(),
    };
    model.twist_identity = model.check_twist_identity(TWIST_BRACKET_DEGREE)?;
    if let Some(c) = model.twist_identity.iter().find(|c| !c.holds) {
        return Err(ActionError::NotAMorphism(format!(
            "twisting by (0, τ) does not give the model: {}",
            c.witness.clone().unwrap_or_default()
        )));
    }
    Ok(model)
}

impl RelativeModel {
    pub fn inclusion(&self) -> &LieMorphism {
        &self.inclusion
    }

    pub fn derivations(&self) -> &Arc<DerivationComplex> {
        &self.der
    }

    /// `Der(L_X)⟨1⟩`.
    pub fn derivation_cover(&self) -> &Arc<DerCover> {
        &self.der1
    }

    /// `Der(L_X‖L_A)⟨1⟩`.
    pub fn relative_cover(&self) -> &Arc<DerCover> {
        &self.rel1
    }

    /// `Der_i(L_A, L_X)`.
    pub fn f_derivations(&self) -> &Arc<DerivationComplex> {
        &self.fder
    }

    pub fn convolution(&self) -> &Arc<ConvolutionDgLie> {
        &self.conv
    }

    pub fn twisted_convolution(&self) -> &Arc<ConvolutionDgLie> {
        &self.twisted
    }

    /// `Hom^τ⟨0⟩`.
    pub fn hom_cover(&self) -> &Arc<HomCover> {
        &self.hom0
    }

    pub fn tau(&self) -> &SparseVec {
        &self.tau
    }

    pub fn product(&self) -> &ModelProduct {
        &self.product
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn twist_identity(&self) -> &[LawCheck] {
        &self.twist_identity
    }

    pub fn valid_range(&self) -> DegreeRange {
        self.product.valid_range()
    }

    fn untwisted(&self) -> UntwistedProduct {
        let (c, conv) = (self.der1.clone(), self.conv.clone());
        let act: ActFn = Arc::new(move |p, theta, q, f| derivation_after(&conv, &c, p, theta, q, f));
        TwistedSemidirect::new(OuterAction::new(
            self.der1.clone(),
            self.conv.clone(),
            act,
            Arc::new(|_, _| Ok(SparseVec::new())),
        ))
    }

    fn include_untwisted(&self, u: &UntwistedProduct, n: i64, v: &SparseVec) -> Result<SparseVec, ActionError> {
        let (theta, f) = self.product.split(n, v)?;
        u.join(n, &theta, &self.hom0.include(n, &f))
    }

    /// Compares `∂ + [(0,τ), −]` on the untwisted product with the model's
    /// differential in every degree, and the brackets up to `bracket_up_to`.
    pub fn check_twist_identity(&self, bracket_up_to: i64) -> Result<Vec<LawCheck>, ActionError> {
        let u = self.untwisted();
        let (lo, hi) = self.valid_range();
        let tau_u = u.join(-1, &SparseVec::new(), &self.tau)?;
        let mut cells = Vec::new();
        for n in lo.max(0)..=hi {
            cells.extend((0..self.product.dim(n)?).map(|j| (n, j)));
        }
        let diffs: Vec<Result<Option<String>, ActionError>> = cells
            .par_iter()
            .filter(|c| c.0 >= 1)
            .map(|&(n, j)| {
                let e = SparseVec::unit(j);
                let model = self.product.differential(n, &e)?;
                let lhs = self.include_untwisted(&u, n - 1, &model)?;
                let ue = self.include_untwisted(&u, n, &e)?;
                let rhs = u.differential(n, &ue)?.add(&u.bracket(-1, &tau_u, n, &ue)?);
                Ok((lhs != rhs).then(|| format!("differential on {}", self.product.basis_label(n, j))))
            })
            .collect();
        let mut pairs = Vec::new();
        for &x in &cells {
            for &y in &cells {
                if x <= y && x.0 + y.0 <= bracket_up_to.min(hi) {
                    pairs.push((x, y));
                }
            }
        }
        let brackets: Vec<Result<Option<String>, ActionError>> = pairs
            .into_par_iter()
            .map(|(x, y)| {
                let (ex, ey) = (SparseVec::unit(x.1), SparseVec::unit(y.1));
                let model = self.product.bracket(x.0, &ex, y.0, &ey)?;
                let lhs = self.include_untwisted(&u, x.0 + y.0, &model)?;
                let ux = self.include_untwisted(&u, x.0, &ex)?;
                let uy = self.include_untwisted(&u, y.0, &ey)?;
                let rhs = u.bracket(x.0, &ux, y.0, &uy)?;
                Ok((lhs != rhs).then(|| {
                    format!(
                        "bracket of {}, {}",
                        self.product.basis_label(x.0, x.1),
                        self.product.basis_label(y.0, y.1)
                    )
                }))
            })
            .collect();
        Ok(vec![law("twisted differential", diffs)?, law("bracket", brackets)?])
    }

    /// `(−1)^{|θ|+1} θ∘π_A` for `θ ∈ Der_i(L_A, L_X)` of degree `n`, landing in
    /// `Hom` of degree `n − 1`.
    pub fn pi_star(&self, n: i64, theta: &SparseVec) -> Result<SparseVec, ActionError> {
        let conv = &self.twisted;
        let ce = conv.coalgebra();
        let a = conv.source();
        let x = conv.target();
        let sign = -Rational::sign(n);
        let mut out = WordValues::new();
        for m in 1..ce.cutoff() {
            for b in 0..a.dim(m)? {
                let img = self.fder.apply(n, theta, &a.basis_element(m, b))?;
                let v = x.coordinates_unchecked(&img)?;
                if !v.is_zero() {
                    out.insert(ce.suspension(m, b)?, v.scale(&sign));
                }
            }
        }
        Ok(conv.from_values(n - 1, &out)?)
    }

    /// `θ∘i` as an f-derivation, for `θ ∈ Der(L_X)` of degree `n`.
    pub fn restrict_along(&self, n: i64, theta: &SparseVec) -> Result<SparseVec, ActionError> {
        let a = self.inclusion.source();
        let mut values = Vec::new();
        for (j, name) in a.generator_names().iter().enumerate() {
            let img = self.inclusion.apply(&a.generator_at(j))?;
            values.push((name.clone(), self.der.apply(n, theta, &img)?));
        }
        Ok(self.fder.from_values(n, values)?)
    }
}

impl DgLieAlgebra for RelativeModel {
    fn valid_range(&self) -> DegreeRange {
        self.product.valid_range()
    }

    fn dim(&self, n: i64) -> Result<usize, LieError> {
        self.product.dim(n)
    }

    fn basis_label(&self, n: i64, i: usize) -> String {
        self.product.basis_label(n, i)
    }

    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        self.product.differential(n, x).map_err(lie_err)
    }

    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        self.product.bracket(p, x, q, y).map_err(lie_err)
    }
}

fn law(name: &str, results: Vec<Result<Option<String>, ActionError>>) -> Result<LawCheck, ActionError> {
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
}

/// Chain-map, bracket and homology verdicts for a comparison map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoVerdict {
    pub chain_map: LawCheck,
    /// `None` for maps that are only linear.
    pub brackets: Option<LawCheck>,
    /// Per source degree, certified by exact ranks.
    pub induced: InducedMap,
}

impl QuasiIsoVerdict {
    pub fn is_quasi_iso(&self) -> bool {
        self.chain_map.holds && self.brackets.as_ref().is_none_or(|b| b.holds) && self.induced.all_iso()
    }
}

/// Matrices of `f` between the underlying complexes, whose bases are the
/// algebras' labels in sorted order.
#[allow(clippy::too_many_arguments)]
fn to_linear_map<S, T>(
    src: &S,
    src_c: &ChainComplex,
    tgt: &T,
    tgt_c: &ChainComplex,
    shift: i64,
    range: DegreeRange,
    images: &BTreeMap<i64, Vec<SparseVec>>,
    rule: SignRule,
) -> Result<GradedLinearMap, ActionError>
where
    S: DgLieAlgebra + ?Sized,
    T: DgLieAlgebra + ?Sized,
{
    let mut matrices = BTreeMap::new();
    for n in range.0..=range.1 {
        let cols_in = images.get(&n).cloned().unwrap_or_default();
        let mut cols = vec![SparseVec::new(); src_c.dim(n)?];
        for (i, v) in cols_in.iter().enumerate() {
            let j = src_c.space().index_of(n, &src.basis_label(n, i)).expect("label");
            cols[j] = v.reindex(|k| tgt_c.space().index_of(n + shift, &tgt.basis_label(n + shift, k)));
        }
        matrices.insert(n, SparseMatrix::from_columns(tgt_c.dim(n + shift)?, cols));
    }
    Ok(GradedLinearMap::new(
        src_c.space().clone(),
        tgt_c.space().clone(),
        shift,
        range,
        matrices,
        rule,
    )?)
}

fn chain_law(check: exactlin::ChainMapCheck) -> LawCheck {
    LawCheck {
        law: "chain map".into(),
        holds: check.holds,
        checked: check.checked.map_or(0, |(lo, hi)| (hi - lo + 1).max(0) as usize),
        witness: check.witness.map(|(n, l)| format!("{l} (degree {n})")),
    }
}

/// `ζ(θ) = (θ, 0)` from `Der(L_X‖L_A)⟨1⟩` into the model: a dg Lie map
/// (brackets checked up to total degree `bracket_up_to`) and a homology iso
/// on degrees `1..hi−1`.
pub fn zeta(model: &RelativeModel, bracket_up_to: i64) -> Result<QuasiIsoVerdict, ActionError> {
    let rel1 = model.rel1.as_ref();
    let rel = rel1.inner();
    let hi = model.valid_range().1.min(rel1.valid_range().1);
    let mut images = BTreeMap::new();
    for n in 1..=hi {
        let cols = (0..rel1.dim(n)?)
            .into_par_iter()
            .map(|j| {
                let inner = rel1.include(n, &SparseVec::unit(j));
                let values = rel.derivation(n, &inner)?.values;
                let full = model.der.from_values(n, values)?;
                let theta = model.der1.restrict(n, &full).ok_or_else(|| ActionError::NotAChainMap {
                    degree: n,
                    label: rel1.basis_label(n, j),
                })?;
                model.product.join(n, &theta, &SparseVec::new())
            })
            .collect::<Result<Vec<_>, ActionError>>()?;
        images.insert(n, cols);
    }
    let f = DgLieMap { images };
    let checks = check_lie_map(rel1, &model.product, &f, hi, bracket_up_to.min(hi))?;
    if let Some(w) = checks[0].witness.clone() {
        return Err(ActionError::NotAChainMap { degree: hi, label: w });
    }
    let src_c = underlying_complex(rel1)?;
    let map = to_linear_map(
        rel1,
        &src_c,
        &model.product,
        &model.complex,
        0,
        (0, hi),
        &f.images,
        SignRule::Commutes,
    )?;
    let induced = induced_map_on_homology(&map, &src_c, &model.complex, 1, hi - 1)?;
    Ok(QuasiIsoVerdict {
        chain_map: checks[0].clone(),
        brackets: Some(checks[1].clone()),
        induced,
    })
}

/// `θ ↦ (−1)^{|θ|+1} θ∘π_A` from `Der_i(L_A, L_X)⟨1⟩` to `Hom^τ⟨0⟩`,
/// lowering degrees by one; it anticommutes with the differentials. The
/// verdict covers target degrees `0..hi−1`.
pub fn s_pi_star(model: &RelativeModel) -> Result<QuasiIsoVerdict, ActionError> {
    let fder1 = ConnectiveCover::new(model.fder.clone(), 1)?;
    let hom0 = model.hom0.as_ref();
    let hi = model.valid_range().1.min(fder1.valid_range().1 - 1);
    let mut images = BTreeMap::new();
    for n in 1..=hi + 1 {
        let cols = (0..fder1.dim(n)?)
            .into_par_iter()
            .map(|j| {
                let theta = fder1.include(n, &SparseVec::unit(j));
                let v = model.pi_star(n, &theta)?;
                hom0.restrict(n - 1, &v).ok_or_else(|| ActionError::NotAChainMap {
                    degree: n,
                    label: fder1.basis_label(n, j),
                })
            })
            .collect::<Result<Vec<_>, ActionError>>()?;
        images.insert(n, cols);
    }
    let src_c = underlying_complex(&fder1)?;
    let tgt_c = underlying_complex(hom0)?;
    let map = to_linear_map(
        &fder1,
        &src_c,
        hom0,
        &tgt_c,
        -1,
        (1, hi + 1),
        &images,
        SignRule::Anticommutes,
    )?;
    let check = verify_chain_map(&map, &src_c, &tgt_c)?;
    if let Some((n, label)) = check.witness.clone() {
        return Err(ActionError::NotAChainMap { degree: n, label });
    }
    let induced = induced_map_on_homology(&map, &src_c, &tgt_c, 1, hi)?;
    Ok(QuasiIsoVerdict {
        chain_map: chain_law(check),
        brackets: None,
        induced,
    })
}

/// Checks `dH + Hd = Ψ − Φ` on `cone(ρ) = Der(L_X)⟨1⟩ ⊕ s(model)` with
/// `d(θ, sψ, sη) = (dθ − ψ, −s∂^τ(ψ, η))`, `H(θ) = (0, sθ, 0)`,
/// `Φ(θ) = (θ, 0, 0)` and `Ψ(θ) = (0, 0, −sπ_A^*(θ∘i))`, for every basis
/// `θ` of degree at most `up_to`.
pub fn check_cone_homotopy(model: &RelativeModel, up_to: i64) -> Result<LawCheck, ActionError> {
    let cone = Cone { model };
    let top = up_to.min(model.valid_range().1).min(model.fder.valid_range().1);
    let mut cells = Vec::new();
    for n in 1..=top {
        cells.extend((0..model.der1.dim(n)?).map(|j| (n, j)));
    }
    let results: Vec<Result<Option<String>, ActionError>> = cells
        .par_iter()
        .map(|&(n, j)| {
            let theta = SparseVec::unit(j);
            // dH(θ)
            let h = cone.join_model(n, &theta, &SparseVec::new())?;
            let (first, second) = cone.d(n + 1, &SparseVec::new(), &h)?;
            // Hd(θ)
            let dtheta = if n > 1 {
                DgLieAlgebra::differential(model.der1.as_ref(), n, &theta)?
            } else {
                SparseVec::new()
            };
            let hd = if n > 1 {
                cone.join_model(n - 1, &dtheta, &SparseVec::new())?
            } else {
                SparseVec::new()
            };
            let lhs = (first, second.add(&hd));
            // Ψ − Φ
            let along = model.restrict_along(n, &model.der1.include(n, &theta))?;
            let pulled = model.pi_star(n, &along)?;
            let pulled = model.hom0.restrict(n - 1, &pulled).ok_or_else(|| ActionError::NotAChainMap {
                degree: n,
                label: "π_A^*(θ∘i) is not a cycle".into(),
            })?;
            let rhs = (theta.neg(), cone.join_model(n - 1, &SparseVec::new(), &pulled.neg())?);
            Ok((lhs != rhs).then(|| format!("θ = {} (degree {n})", model.der1.basis_label(n, j))))
        })
        .collect();
    law("dH + Hd = Ψ − Φ", results)
}

/// `cone(ρ)_n = Der(L_X)⟨1⟩_n ⊕ model_{n−1}`.
struct Cone<'a> {
    model: &'a RelativeModel,
}

impl Cone<'_> {
    fn join_model(&self, n: i64, theta: &SparseVec, f: &SparseVec) -> Result<SparseVec, ActionError> {
        if n < 0 {
            return Ok(SparseVec::new());
        }
        self.model.product.join(n, theta, f)
    }

    /// `d(θ, sm) = (Dθ − ψ, −s∂m)` with `ψ` the derivation part of `m`.
    fn d(&self, n: i64, theta: &SparseVec, m: &SparseVec) -> Result<(SparseVec, SparseVec), ActionError> {
        let der1 = self.model.der1.as_ref();
        let dtheta = if n > 1 && !theta.is_zero() {
            DgLieAlgebra::differential(der1, n, theta)?
        } else {
            SparseVec::new()
        };
        let (psi, _) = self.model.product.split(n - 1, m)?;
        let first = if n > 1 { dtheta.sub(&psi) } else { SparseVec::new() };
        let second = self.model.product.differential(n - 1, m)?.neg();
        Ok((first, second))
    }
}
