//! Library calls behind the subcommands.

use std::sync::Arc;

use actions_semidirect::{
    build_relative_model, check_cone_homotopy, check_outer_axioms, derivation_action, derivation_hom_action,
    induced_hom_action, s_pi_star, zeta, ActFn, AxiomReport, QuasiIsoVerdict, RelativeModel, XiFn,
};
use ce_convolution::{build_ce, build_convolution, indecomposables_comparison, tau_from_inclusion, universal_twisting};
use derivations::{build_der, build_rel_der, build_vanishing_der, restriction_ses};
use exactlin::{betti_numbers, Rational};
use gla_free::{
    check_antisymmetry, check_d_squared, check_jacobi, check_leibniz, underlying_complex, ConnectiveCover,
    DgLieAlgebra, FreeGradedLie, LawCheck, LieElement, LieMorphism,
};

use crate::error::CliError;
use crate::report::{DimTable, Verdict};
use crate::spec::{ModelFile, ModelSpec, MorphismSpec};

/// Word cutoffs beyond this are refused.
const MAX_WORD_CUTOFF: i64 = 30;
/// Outer-action axioms are checked up to this total degree at most.
pub const AXIOM_DEGREE: i64 = 6;
/// Word cutoff of `Hom(C̄L_A, L_X)` in the outer-axiom suite; words of two
/// letters are needed for its bracket to be seen at all.
const HOM_WORD_CUTOFF: i64 = 4;
/// Brackets of the comparison maps are checked up to this total degree.
pub const BRACKET_DEGREE: i64 = 4;

pub const SUITES: [&str; 9] = [
    "dsquare",
    "jacobi",
    "ce",
    "mc",
    "outer-axioms",
    "zeta",
    "spi",
    "ses",
    "cone-homotopy",
];

fn law_verdict(c: &LawCheck) -> Verdict {
    Verdict::from_check(&c.law, c.holds, c.witness.clone())
}

/// `H_n` of the positive truncation `⟨1⟩` of a dg Lie algebra, `1 ≤ n ≤ top`.
pub fn cover_homology<A: DgLieAlgebra>(a: A, top: i64) -> Result<Vec<(i64, usize)>, CliError> {
    let cover = ConnectiveCover::new(a, 1)?;
    Ok(betti_numbers(&underlying_complex(&cover)?, 1, top)?)
}

pub fn lie_homology(l: &FreeGradedLie, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>, CliError> {
    Ok(betti_numbers(&underlying_complex(l)?, lo, hi)?)
}

fn finite_dimensional(a: &ModelSpec) -> bool {
    match a.generators.as_slice() {
        [] => true,
        [(_, d)] => d % 2 == 0,
        _ => false,
    }
}

/// A built relative model for a free extension, with the truncation it was
/// built at.
pub struct RelativeRun {
    pub inclusion: LieMorphism,
    pub model: RelativeModel,
    pub word_cutoff: i64,
    pub cutoff: i64,
    /// Degrees `1..=top` are certified.
    pub top: i64,
    /// Why dropping words above the word cutoff is harmless.
    pub truncation: String,
}

/// The word cutoff `P` and the reason it suffices.
///
/// When `L_A` is finite dimensional every word is kept. Otherwise `P` is
/// pushed above the top degree of `H(L_X)` within the computed range, so
/// that the dropped part of `Hom` only sees acyclic degrees.
pub fn choose_word_cutoff(a: &ModelSpec, x: &ModelSpec, top: i64) -> Result<(i64, String), CliError> {
    let mut p = a.max_degree() + 1;
    if finite_dimensional(a) {
        return Ok((p, format!("C̄ of {} is finite, no word is dropped (word cutoff {p})", a.name)));
    }
    loop {
        let c = top + 1 + p.max(x.max_degree());
        let l = x.build(c)?;
        let h = lie_homology(&l, 1, c - 1)?;
        match h.iter().rev().find(|(d, k)| *d >= p && *k > 0) {
            None => {
                return Ok((
                    p,
                    format!(
                        "word cutoff {p}: H_q({}) = 0 for {p} ≤ q ≤ {}, checked exactly",
                        x.name,
                        c - 1
                    ),
                ))
            }
            Some((d, _)) => {
                p = d + 1;
                if p > MAX_WORD_CUTOFF {
                    return Err(CliError::Range(format!(
                        "H({}) does not vanish above degree {d}; no word cutoff up to {MAX_WORD_CUTOFF} is exact",
                        x.name
                    )));
                }
            }
        }
    }
}

pub fn relative_run(file: &ModelFile, map: &MorphismSpec, top: i64) -> Result<RelativeRun, CliError> {
    let a = file.model(&map.source)?;
    let x = file.model(&map.target)?;
    let (p, truncation) = choose_word_cutoff(a, x, top)?;
    let cutoff = top + 1 + p.max(x.max_degree());
    let inclusion = file.build_map(map, cutoff)?;
    if !inclusion.is_free_extension() {
        return Err(CliError::NotAFreeExtension(map.name.clone()));
    }
    let model = build_relative_model(&inclusion, p, None)?;
    Ok(RelativeRun {
        inclusion,
        model,
        word_cutoff: p,
        cutoff,
        top,
        truncation,
    })
}

impl RelativeRun {
    /// `H_n(Der(L_X‖L_A)⟨1⟩)` for `1 ≤ n ≤ top`.
    pub fn relative_homology(&self) -> Result<Vec<(i64, usize)>, CliError> {
        Ok(betti_numbers(
            &underlying_complex(self.model.relative_cover().as_ref())?,
            1,
            self.top,
        )?)
    }

    pub fn model_homology(&self) -> Result<Vec<(i64, usize)>, CliError> {
        Ok(betti_numbers(self.model.complex(), 1, self.top)?)
    }

    /// Equal dimensions and `ζ` a quasi-isomorphism on `1..=top`.
    pub fn dual_pipeline(&self) -> Result<Vec<Verdict>, CliError> {
        let rel = self.relative_homology()?;
        let model = self.model_homology()?;
        let mut out = vec![match rel.iter().zip(&model).find(|(r, m)| r != m) {
            None => Verdict::pass("dimensions agree with the twisted semidirect model"),
            Some((r, m)) => Verdict::fail(
                "dimensions agree with the twisted semidirect model",
                format!("degree {}: relative {} vs model {}", r.0, r.1, m.1),
            ),
        }];
        out.extend(quasi_iso_verdicts("ζ", &zeta(&self.model, BRACKET_DEGREE)?, 1, self.top));
        Ok(out)
    }
}

/// Chain map, brackets and homology iso on source degrees `lo..=hi`.
pub fn quasi_iso_verdicts(name: &str, q: &QuasiIsoVerdict, lo: i64, hi: i64) -> Vec<Verdict> {
    let mut out = vec![Verdict::from_check(
        &format!("{name} is a chain map"),
        q.chain_map.holds,
        q.chain_map.witness.clone(),
    )];
    if let Some(b) = &q.brackets {
        out.push(Verdict::from_check(
            &format!("{name} preserves brackets up to degree {BRACKET_DEGREE}"),
            b.holds,
            b.witness.clone(),
        ));
    }
    let name = format!("{name} induces an iso on H in degrees {lo}..{hi}");
    let bad = q
        .induced
        .degrees
        .iter()
        .filter(|d| d.degree >= lo && d.degree <= hi)
        .find(|d| !d.iso);
    let covered = (lo..=hi).all(|n| q.induced.degrees.iter().any(|d| d.degree == n));
    out.push(match (bad, covered) {
        (Some(d), _) => Verdict::fail(
            &name,
            format!(
                "degree {}: rank {} between dimensions {} and {}",
                d.degree, d.rank, d.source_dim, d.target_dim
            ),
        ),
        (None, false) => Verdict::fail(&name, "some degrees lie outside the computed range"),
        (None, true) => Verdict::pass(&name),
    });
    out
}

fn axiom_verdicts(label: &str, r: &AxiomReport) -> Vec<Verdict> {
    r.checks
        .iter()
        .map(|c| Verdict::from_check(&format!("{label}: {}", c.law), c.holds, c.witness.clone()))
        .collect()
}

/// What a suite computed.
#[derive(Default)]
pub struct SuiteOutcome {
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<DimTable>,
    pub notes: Vec<String>,
    pub valid: Option<(i64, i64)>,
}

pub struct SuiteInput<'a> {
    pub file: &'a ModelFile,
    pub model: Option<&'a str>,
    pub map: Option<&'a str>,
    pub top: i64,
    /// Flip signs in the tested structure, as a negative control.
    pub corrupt: bool,
}

pub fn run_suite(suite: &str, input: &SuiteInput<'_>) -> Result<SuiteOutcome, CliError> {
    let top = input.top;
    let single = || -> Result<(ModelSpec, FreeGradedLie), CliError> {
        let spec = input.file.choose_model(input.model)?.clone();
        let l = spec.build(top + 1)?;
        Ok((spec, l))
    };
    let mut out = SuiteOutcome::default();
    match suite {
        "dsquare" => {
            let (_, l) = single()?;
            out.verdicts.push(law_verdict(&check_d_squared(&l, top)?));
            out.verdicts.push(law_verdict(&check_leibniz(&l, top)?));
            out.valid = Some((1, top));
        }
        "jacobi" => {
            let (_, l) = single()?;
            out.verdicts.push(law_verdict(&check_antisymmetry(&l, top)?));
            out.verdicts.push(law_verdict(&check_jacobi(&l, top)?));
            out.valid = Some((1, top));
        }
        "ce" => {
            let (_, l) = single()?;
            let l = Arc::new(l);
            let ce = build_ce(l.clone(), top, true)?;
            out.verdicts.push(law_verdict(&ce.check_coassociativity()));
            out.verdicts.push(law_verdict(&ce.check_cocommutativity()));
            out.verdicts.push(law_verdict(&ce.check_coderivation()));
            let hi = top - 1;
            let cmp = indecomposables_comparison(l, (1, hi))?;
            out.tables.push(DimTable {
                title: "H_{p+1}(C̄L) by p".into(),
                rows: cmp.iter().map(|v| (v.degree, v.ce_dim)).collect(),
            });
            let bad = cmp.iter().find(|v| !v.iso);
            out.verdicts.push(match bad {
                None => Verdict::pass("C̄L → sQ(L) is a quasi-isomorphism"),
                Some(v) => Verdict::fail(
                    "C̄L → sQ(L) is a quasi-isomorphism",
                    format!("p = {}: {} vs {}", v.degree, v.ce_dim, v.indecomposables_dim),
                ),
            });
            out.valid = Some((1, hi));
        }
        "mc" => {
            let (_, l) = single()?;
            let ce = Arc::new(build_ce(Arc::new(l), top, true)?);
            out.verdicts.push(match universal_twisting(ce) {
                Ok(_) => Verdict::pass(&format!("π satisfies the MC equation on words of degree ≤ {top}")),
                Err(e) => Verdict::fail(&format!("π satisfies the MC equation on words of degree ≤ {top}"), e.to_string()),
            });
            if let Ok(map) = input.file.choose_map(input.map) {
                let i = input.file.build_map(map, top + 2)?;
                let conv = build_convolution(i.source().clone(), i.target().clone(), top, Some(1))?;
                let name = format!("τ = {}∘π is Maurer–Cartan on words of degree ≤ {top}", map.name);
                out.verdicts.push(match tau_from_inclusion(&conv, &i) {
                    Ok(_) => Verdict::pass(&name),
                    Err(e) => Verdict::fail(&name, e.to_string()),
                });
            }
            out.valid = Some((1, top));
        }
        "outer-axioms" => {
            let up_to = top.min(AXIOM_DEGREE);
            let spec = input.file.choose_model(input.model)?.clone();
            let pair = input.file.choose_map(input.map).ok();
            let l = match pair {
                Some(m) => input.file.build_map(m, up_to + HOM_WORD_CUTOFF + 2)?.target().clone(),
                None => Arc::new(spec.build(up_to + 3)?),
            };
            let der = Arc::new(build_der(l.clone(), Some(up_to))?);
            let mut action = derivation_action(Arc::new(ConnectiveCover::new(der.clone(), 1)?));
            if input.corrupt {
                let act = action.act_fn().clone();
                let flipped: ActFn = Arc::new(move |p, x, q, a| Ok(act(p, x, q, a)?.neg()));
                action = action.with_act(flipped);
            }
            out.verdicts.extend(axiom_verdicts("Der-action", &check_outer_axioms(&action, up_to)?));
            if let Some(m) = pair {
                let i = input.file.build_map(m, up_to + HOM_WORD_CUTOFF + 2)?;
                let conv = Arc::new(build_convolution(
                    i.source().clone(),
                    i.target().clone(),
                    HOM_WORD_CUTOFF,
                    None,
                )?);
                if !input.corrupt {
                    let induced = induced_hom_action(&action, conv.clone(), up_to)?;
                    out.verdicts
                        .extend(axiom_verdicts("induced Hom-action", &check_outer_axioms(&induced, up_to)?));
                }
                let tau = tau_from_inclusion(&conv, &i)?;
                let twisted = Arc::new(conv.twist(&tau)?);
                let der = Arc::new(build_der(i.target().clone(), Some(up_to))?);
                let mut twisted_action = derivation_hom_action(der, twisted, tau)?;
                if input.corrupt {
                    let xi = twisted_action.xi_fn().clone();
                    let flipped: XiFn = Arc::new(move |p, x| Ok(xi(p, x)?.scale(&Rational::from_integer(-1))));
                    twisted_action = twisted_action.with_xi(flipped);
                }
                out.verdicts.extend(axiom_verdicts(
                    "Der-action on Hom^τ",
                    &check_outer_axioms(&twisted_action, up_to)?,
                ));
            }
            out.notes.push(format!("axioms checked up to total degree {up_to}"));
            out.valid = Some((1, up_to));
        }
        "zeta" | "spi" | "cone-homotopy" => {
            let map = input.file.choose_map(input.map)?;
            let run = relative_run(input.file, map, top)?;
            out.notes.push(run.truncation.clone());
            match suite {
                "zeta" => {
                    out.tables.push(DimTable {
                        title: "H(Der(L_X‖L_A)⟨1⟩)".into(),
                        rows: run.relative_homology()?,
                    });
                    out.tables.push(DimTable {
                        title: "H(twisted semidirect model)".into(),
                        rows: run.model_homology()?,
                    });
                    out.verdicts.extend(run.dual_pipeline()?);
                }
                "spi" => {
                    let q = s_pi_star(&run.model)?;
                    // source degree p + 1 lands in target degree p
                    out.verdicts.extend(quasi_iso_verdicts("sπ*", &q, 1, top + 1));
                }
                _ => {
                    let c = check_cone_homotopy(&run.model, top)?;
                    out.verdicts.push(law_verdict(&c));
                }
            }
            out.valid = Some((1, top));
        }
        "ses" => {
            let map = input.file.choose_map(input.map)?;
            let i = input.file.build_map(map, top + 1 + input.file.model(&map.target)?.max_degree())?;
            if !i.is_free_extension() {
                return Err(CliError::NotAFreeExtension(map.name.clone()));
            }
            let ses = restriction_ses(&i, Some(top))?;
            out.verdicts.push(Verdict::from_check(
                "inclusion is a chain map",
                ses.inclusion_is_chain_map,
                Some("inclusion".into()),
            ));
            out.verdicts.push(Verdict::from_check(
                "restriction is a chain map",
                ses.restriction_is_chain_map,
                Some("restriction".into()),
            ));
            let bad = ses.degrees.iter().find(|d| !d.exact());
            out.verdicts.push(match bad {
                None => Verdict::pass("0 → Der(L_X‖L_A) → Der(L_X) → Der_i(L_A,L_X) → 0 is exact"),
                Some(d) => Verdict::fail(
                    "0 → Der(L_X‖L_A) → Der(L_X) → Der_i(L_A,L_X) → 0 is exact",
                    format!("degree {}: dims {:?}", d.degree, d.dims),
                ),
            });
            out.valid = Some(ses.range());
        }
        other => return Err(CliError::UnknownSuite(other.to_string(), SUITES.join(", "))),
    }
    Ok(out)
}

/// `Der(L_X)` vanishing on the images of the map's generators, truncated
/// at `⟨1⟩`, for `1 ≤ n ≤ top`.
pub fn vanishing_homology(file: &ModelFile, map: &MorphismSpec, top: i64) -> Result<Vec<(i64, usize)>, CliError> {
    let x = file.model(&map.target)?;
    let cutoff = top + 1 + x.max_degree().max(file.model(&map.source)?.max_degree());
    let i = file.build_map(map, cutoff)?;
    let images: Vec<LieElement> = (0..i.source().generators().len()).map(|k| i.image(k)).collect();
    let der = build_vanishing_der(i.target().clone(), images, Some(top + 1))?;
    cover_homology(der, top)
}

/// `H_n(Der(L_X‖L_A)⟨1⟩)` straight from the relative derivations.
pub fn relative_homology(file: &ModelFile, map: &MorphismSpec, top: i64) -> Result<Vec<(i64, usize)>, CliError> {
    let x = file.model(&map.target)?;
    let i = file.build_map(map, top + 1 + x.max_degree())?;
    if !i.is_free_extension() {
        return Err(CliError::NotAFreeExtension(map.name.clone()));
    }
    cover_homology(build_rel_der(&i, Some(top + 1))?, top)
}
