use std::sync::Arc;

use exactlin::SparseVec;
use gla_free::{FreeGradedLie, LieElement, LieError, LieMorphism};

use crate::complex::{DerivationComplex, DerivationKind, Slot};
use crate::error::DerError;

fn slots_of(l: &FreeGradedLie, keep: impl Fn(usize) -> bool) -> Vec<Slot> {
    l.generators()
        .iter()
        .enumerate()
        .filter(|(i, _)| keep(*i))
        .map(|(i, g)| Slot {
            generator: i,
            name: g.name.clone(),
            degree: g.degree,
        })
        .collect()
}

/// Largest top degree that the target's cutoff supports for these slots.
fn top_degree(target: &FreeGradedLie, slots: &[Slot], extra: i64, max_degree: Option<i64>) -> i64 {
    let reach = slots.iter().map(|s| s.degree).max().unwrap_or(0).max(extra);
    max_degree.unwrap_or(target.cutoff() - reach)
}

/// `Der(L)`, up to `max_degree` (default: as far as the cutoff allows).
pub fn build_der(l: Arc<FreeGradedLie>, max_degree: Option<i64>) -> Result<DerivationComplex, DerError> {
    let slots = slots_of(&l, |_| true);
    let hi = top_degree(&l, &slots, 0, max_degree);
    DerivationComplex::assemble(DerivationKind::Full, l.clone(), l, None, slots, hi, Vec::new())
}

/// Derivations of the target of a free extension `f: L_A → L_X` that
/// vanish on the image of `L_A`.
pub fn build_rel_der(f: &LieMorphism, max_degree: Option<i64>) -> Result<DerivationComplex, DerError> {
    let map = f.generator_map().ok_or_else(|| {
        DerError::NotAFreeExtension("generators do not map injectively to generators".into())
    })?;
    let x = f.target().clone();
    let slots = slots_of(&x, |i| !map.contains(&i));
    let hi = top_degree(&x, &slots, 0, max_degree);
    DerivationComplex::assemble(
        DerivationKind::Relative,
        x.clone(),
        x,
        Some(f.clone()),
        slots,
        hi,
        Vec::new(),
    )
}

/// Derivations of `L` annihilating every element of `elements`.
pub fn build_vanishing_der(
    l: Arc<FreeGradedLie>,
    elements: Vec<LieElement>,
    max_degree: Option<i64>,
) -> Result<DerivationComplex, DerError> {
    for s in &elements {
        l.coordinates(s)?;
    }
    let slots = slots_of(&l, |_| true);
    let extra = elements.iter().map(|s| s.degree()).max().unwrap_or(0);
    let hi = top_degree(&l, &slots, extra, max_degree);
    DerivationComplex::assemble(
        DerivationKind::VanishingOnElements,
        l.clone(),
        l,
        None,
        slots,
        hi,
        elements,
    )
}

/// Derivations along `f: L_A → L_X`, i.e. maps `θ` with
/// `θ[x,y] = [θx, fy] + (−1)^{|θ||x|}[fx, θy]`.
pub fn build_f_der(f: &LieMorphism, max_degree: Option<i64>) -> Result<DerivationComplex, DerError> {
    let a = f.source().clone();
    let slots = slots_of(&a, |_| true);
    let hi = top_degree(f.target(), &slots, 0, max_degree);
    DerivationComplex::assemble(
        DerivationKind::FDerivations,
        a,
        f.target().clone(),
        Some(f.clone()),
        slots,
        hi,
        Vec::new(),
    )
}

/// `ad_x = [x, −]` as an element of `der` (degree `|x|`).
pub fn adjoint(der: &DerivationComplex, x: &LieElement) -> Result<SparseVec, DerError> {
    if der.kind() == DerivationKind::FDerivations {
        return Err(DerError::Unsupported("adjoint of an f-derivation".into()));
    }
    let l = der.target();
    let values: Vec<(String, LieElement)> = der
        .slots()
        .iter()
        .map(|s| Ok((s.name.clone(), l.bracket(x, &l.generator_at(s.generator))?)))
        .collect::<Result<_, LieError>>()?;
    if der.kind() == DerivationKind::Relative {
        let f = der.morphism().expect("relative complex keeps its morphism");
        for i in f.generator_map().unwrap_or(&[]) {
            if !l.bracket(x, &l.generator_at(*i))?.is_zero() {
                return Err(DerError::NotInComplex(format!(
                    "ad_x does not vanish on {}",
                    l.generator_names()[*i]
                )));
            }
        }
    }
    der.from_values(x.degree(), values)
}
