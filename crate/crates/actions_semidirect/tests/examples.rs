mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use actions_semidirect::*;
use ce_convolution::{build_convolution, WordValues};
use common::*;
use derivations::{adjoint, build_der};
use exactlin::{betti_numbers, SparseVec};
use gla_free::{check_dg_lie_laws, ConnectiveCover, DgLieAlgebra, FreeGradedLie, LieMorphism};

fn der_cover(l: &Arc<FreeGradedLie>, hi: i64) -> Arc<DerCover> {
    let der = Arc::new(build_der(l.clone(), Some(hi)).unwrap());
    Arc::new(ConnectiveCover::new(der, 1).unwrap())
}

/// `g = L(w)`, `|w| = 2`, acting on `L(a,b)`, `db = a`, through `w ↦ b`, so
/// that `w.x = [b,x]` and `ξ(w) = a`.
fn inner_on_disk() -> OuterAction<FreeGradedLie, FreeGradedLie> {
    let g = Arc::new(free(&[("w", 2)], 6));
    let l = Arc::new(disk_ab(6));
    let b = l.coordinates(&l.generator("b").unwrap()).unwrap();
    let f = LinearImages {
        images: BTreeMap::from([(2, vec![b])]),
    };
    inner_action(g, l, f)
}

fn assert_all_hold(checks: &[gla_free::LawCheck]) {
    for c in checks {
        assert!(c.holds, "{c:?}");
    }
}

#[test]
fn evaluation_action_satisfies_the_axioms() {
    let l = Arc::new(cp(2, 8));
    let action = derivation_action(der_cover(&l, 4));
    let report = check_outer_axioms(&action, 6).unwrap();
    assert!(report.holds(), "{:?}", report.first_failure());
    assert_eq!(report.checks.len(), 5);
    assert!(report.checks.iter().all(|c| c.checked > 0));
}

#[test]
fn trivial_action_satisfies_the_axioms() {
    let l = Arc::new(disk_uv(8));
    let g = Arc::new(cp(2, 6));
    let report = check_outer_axioms(&OuterAction::trivial(g, l), 6).unwrap();
    assert!(report.holds());
}

#[test]
fn inner_action_with_nonzero_xi() {
    let a = inner_on_disk();
    let w = SparseVec::unit(0);
    let l = a.target();
    assert_eq!(a.xi(2, &w).unwrap(), l.coordinates(&l.generator("a").unwrap()).unwrap());
    let report = check_outer_axioms(&a, 6).unwrap();
    assert!(report.holds(), "{:?}", report.first_failure());
}

#[test]
fn flipping_xi_breaks_only_the_differential_axiom() {
    let a = inner_on_disk();
    let xi = a.xi_fn().clone();
    let bad = a.with_xi(Arc::new(move |p, x| Ok(xi(p, x)?.neg())));
    let report = check_outer_axioms(&bad, 6).unwrap();
    let failing: Vec<&str> = report.checks.iter().filter(|c| !c.holds).map(|c| c.law.as_str()).collect();
    assert_eq!(failing, vec!["(V) differential compatibility"]);
    let witness = report.first_failure().unwrap().witness.clone().unwrap();
    assert!(!witness.is_empty());
    assert!(matches!(
        report.into_result(),
        Err(ActionError::AxiomViolation { axiom, .. }) if axiom.starts_with("(V)")
    ));
    // and the product is no longer a dg Lie algebra
    let product = TwistedSemidirect::new(bad);
    assert!(check_dg_lie_laws(&product, 6).unwrap().iter().any(|c| !c.holds));
}

#[test]
fn non_lie_map_breaks_bracket_compatibility() {
    // w, w' ↦ a kills [w,w'] but [a,a] ≠ 0
    let g = Arc::new(free(&[("w", 1), ("v", 1)], 4));
    let l = Arc::new(disk_ab(6));
    let a = l.coordinates(&l.generator("a").unwrap()).unwrap();
    let f = LinearImages {
        images: BTreeMap::from([(1, vec![a.clone(), a])]),
    };
    let report = check_outer_axioms(&inner_action(g, l, f), 4).unwrap();
    assert_eq!(report.first_failure().unwrap().law, "(I) bracket compatibility");
}

#[test]
fn action_and_morphism_correspond() {
    // evaluation action: image lies in the derivation factor
    let l = Arc::new(cp(2, 8));
    let cover = der_cover(&l, 5);
    let action = derivation_action(cover.clone());
    let target = Arc::new(AdjointSemidirect::new(cover.inner().clone()).unwrap());
    let psi = action_to_morphism(&action, &target, 4).unwrap();
    for (&n, cols) in &psi.images {
        for (j, v) in cols.iter().enumerate() {
            let (theta, x) = target.split(n, v).unwrap();
            assert!(x.is_zero());
            assert_eq!(theta, SparseVec::unit(j), "degree {n}");
        }
    }
    let back = morphism_to_action(cover.clone(), target.clone(), psi);
    for p in 1..=3 {
        for i in 0..cover.dim(p).unwrap() {
            for q in 1..=8 - p {
                for k in 0..l.dim(q).unwrap() {
                    let (x, y) = (SparseVec::unit(i), SparseVec::unit(k));
                    assert_eq!(back.act(p, &x, q, &y).unwrap(), action.act(p, &x, q, &y).unwrap());
                }
            }
        }
    }
}

#[test]
fn inner_action_morphism_has_a_suspension_part() {
    let a = inner_on_disk();
    let l = a.target().clone();
    let der = Arc::new(build_der(l.clone(), Some(4)).unwrap());
    let target = Arc::new(AdjointSemidirect::new(der.clone()).unwrap());
    let psi = action_to_morphism(&a, &target, 4).unwrap();
    let (theta, x) = target.split(2, &psi.apply(2, &SparseVec::unit(0))).unwrap();
    // ψ(w) = (ad_b, −s a)
    let ad_b = adjoint(&der, &l.generator("b").unwrap()).unwrap();
    assert_eq!(target.cover().include(2, &theta), ad_b);
    assert_eq!(x, l.coordinates(&l.generator("a").unwrap()).unwrap().neg());
    let checks = check_lie_map(a.acting().as_ref(), target.as_ref(), &psi, 4, 4).unwrap();
    assert_all_hold(&checks);
    let back = morphism_to_action(a.acting().clone(), target, psi);
    let w = SparseVec::unit(0);
    assert_eq!(back.xi(2, &w).unwrap(), a.xi(2, &w).unwrap());
    for q in 1..=4 {
        for k in 0..l.dim(q).unwrap() {
            let y = SparseVec::unit(k);
            assert_eq!(back.act(2, &w, q, &y).unwrap(), a.act(2, &w, q, &y).unwrap());
        }
    }
}

#[test]
fn corrupted_action_is_refused_by_the_correspondence() {
    let a = inner_on_disk();
    let xi = a.xi_fn().clone();
    let bad = a.with_xi(Arc::new(move |p, x| Ok(xi(p, x)?.scale(&q(2, 1)))));
    let der = Arc::new(build_der(a.target().clone(), Some(4)).unwrap());
    let target = AdjointSemidirect::new(der).unwrap();
    assert!(matches!(
        action_to_morphism(&bad, &target, 4),
        Err(ActionError::AxiomViolation { .. })
    ));
}

#[test]
fn adjoint_semidirect_is_a_dg_lie_algebra() {
    let l = Arc::new(cp(2, 8));
    let der = Arc::new(build_der(l, Some(5)).unwrap());
    let product = AdjointSemidirect::new(der).unwrap();
    assert_all_hold(&check_dg_lie_laws(&product, 5).unwrap());
    let l = Arc::new(disk_ab(6));
    let der = Arc::new(build_der(l, Some(4)).unwrap());
    assert_all_hold(&check_dg_lie_laws(&AdjointSemidirect::new(der).unwrap(), 5).unwrap());
}

#[test]
fn twisted_products_are_dg_lie_algebras() {
    assert_all_hold(&check_dg_lie_laws(&TwistedSemidirect::new(inner_on_disk()), 6).unwrap());
    let l = Arc::new(cp(2, 8));
    let product = TwistedSemidirect::new(derivation_action(der_cover(&l, 4)));
    assert_all_hold(&check_dg_lie_laws(&product, 5).unwrap());
}

#[test]
fn literal_bracket_is_the_only_consistent_variant() {
    // the product is only as deep as the derivation cover, and Jacobi on
    // (ad_x1, ad_x1, x2) needs degree 5 to rule out the negated action
    let l = Arc::new(cp(2, 8));
    let pin = pin_bracket_variant(&derivation_action(der_cover(&l, 5)), 5).unwrap();
    assert!(pin.literal_passes);
    assert_eq!(pin.unique(), Some(BracketVariant::LITERAL), "{:?}", pin.passing);
    assert_eq!(BracketVariant::LITERAL.to_string(), "[a,b] + x.b − (−1)^{|y||a|} y.a");
}

#[test]
fn induced_action_on_convolution() {
    let a = Arc::new(cp(1, 8));
    let x = Arc::new(cp(2, 8));
    let conv = Arc::new(build_convolution(a, x.clone(), 5, Some(3)).unwrap());
    let action = derivation_action(der_cover(&x, 3));
    let induced = induced_hom_action(&action, conv.clone(), 3).unwrap();
    let report = check_outer_axioms(&induced, 3).unwrap();
    assert!(report.holds(), "{:?}", report.first_failure());
    // ξ̃ vanishes on the reduced coalgebra
    for p in 1..=3 {
        for i in 0..induced.acting().dim(p).unwrap() {
            assert!(induced.xi(p, &SparseVec::unit(i)).unwrap().is_zero());
        }
    }
    // pointwise on a rank-one f: sx1 ↦ x1
    let sx1 = conv.coalgebra().suspension(1, 0).unwrap();
    let x1 = x.coordinates(&x.generator("x1").unwrap()).unwrap();
    let f = conv.from_values(-1, &WordValues::from([(sx1, x1.clone())])).unwrap();
    for i in 0..induced.acting().dim(2).unwrap() {
        let theta = SparseVec::unit(i);
        let out = conv.values(1, &induced.act(2, &theta, -1, &f).unwrap()).unwrap();
        let expected = action.act(2, &theta, 1, &x1).unwrap();
        assert_eq!(out.get(&sx1).cloned().unwrap_or_default(), expected);
        assert!(out.keys().all(|w| *w == sx1));
    }
}

#[test]
fn induced_action_loses_the_counit_term() {
    let a = inner_on_disk();
    let conv = Arc::new(build_convolution(Arc::new(free(&[("c", 1)], 6)), a.target().clone(), 3, Some(3)).unwrap());
    let induced = induced_hom_action(&a, conv, 4).unwrap();
    let report = check_outer_axioms(&induced, 3).unwrap();
    let failing: Vec<&str> = report.checks.iter().filter(|c| !c.holds).map(|c| c.law.as_str()).collect();
    assert_eq!(failing, vec!["(V) differential compatibility"]);
}

#[test]
fn induced_action_needs_the_same_target() {
    let conv = Arc::new(build_convolution(Arc::new(cp(1, 6)), Arc::new(cp(2, 6)), 3, Some(2)).unwrap());
    assert!(matches!(
        induced_hom_action(&inner_on_disk(), conv, 3),
        Err(ActionError::Incompatible(_))
    ));
}

fn model(a: FreeGradedLie, x: FreeGradedLie, word_cutoff: i64) -> RelativeModel {
    let i = LieMorphism::inclusion(Arc::new(a), Arc::new(x)).unwrap();
    build_relative_model(&i, word_cutoff, None).unwrap()
}

#[test]
fn model_of_the_empty_extension_is_the_derivation_cover() {
    let m = model(free(&[], 10), disk_uv(10), 1);
    let (_, hi) = m.valid_range();
    for n in 1..=hi {
        assert_eq!(m.product().dim(n).unwrap(), m.derivation_cover().dim(n).unwrap(), "degree {n}");
        assert_eq!(m.product().target_dim(n).unwrap(), 0);
    }
    assert!(m.tau().is_zero());
}

#[test]
fn model_rejects_bad_inputs() {
    let i = LieMorphism::inclusion(Arc::new(cp(1, 10)), Arc::new(cp(2, 10))).unwrap();
    assert!(matches!(build_relative_model(&i, 1, None), Err(ActionError::Incompatible(_))));
    let id = LieMorphism::identity(Arc::new(cp(2, 8)));
    let not_free = LieMorphism::new(
        Arc::new(free(&[("y", 2)], 8)),
        Arc::new(free(&[("u", 2), ("v", 2)], 8)),
        [("y", {
            let t = free(&[("u", 2), ("v", 2)], 8);
            t.generator("u").unwrap().add(&t.generator("v").unwrap()).unwrap()
        })],
    )
    .unwrap();
    assert!(id.is_free_extension());
    assert!(matches!(build_relative_model(&not_free, 3, None), Err(ActionError::NotAFreeExtension)));
}

#[test]
fn sphere_in_disk_model_is_acyclic() {
    let m = model(free(&[("u", 2)], 14), disk_uv(14), 3);
    assert_all_hold(m.twist_identity());
    let (_, hi) = m.valid_range();
    assert!(hi >= 11);
    for (n, b) in betti_numbers(m.complex(), 1, 10).unwrap() {
        assert_eq!(b, 0, "degree {n}");
    }
    let z = zeta(&m, 4).unwrap();
    assert!(z.is_quasi_iso(), "{z:?}");
    let s = s_pi_star(&m).unwrap();
    assert!(s.is_quasi_iso(), "{s:?}");
    assert!(check_cone_homotopy(&m, 6).unwrap().holds);
}

#[test]
fn projective_line_in_plane() {
    let m = model(cp(1, 14), cp(2, 14), 5);
    assert_all_hold(m.twist_identity());
    let betti = betti_numbers(m.complex(), 1, 8).unwrap();
    let rel = betti_numbers(&gla_free::underlying_complex(m.relative_cover().as_ref()).unwrap(), 1, 8).unwrap();
    assert_eq!(betti, rel);
    assert_eq!(betti[0], (1, 1));
    let z = zeta(&m, 4).unwrap();
    assert!(z.is_quasi_iso(), "{z:?}");
    assert!(z.brackets.unwrap().holds);
    let s = s_pi_star(&m).unwrap();
    assert!(s.is_quasi_iso(), "{s:?}");
    let h = check_cone_homotopy(&m, 6).unwrap();
    assert!(h.holds, "{h:?}");
}

#[test]
fn model_product_laws_in_low_degrees() {
    let m = model(cp(1, 10), cp(2, 10), 5);
    assert_all_hold(&check_dg_lie_laws(m.product(), 4).unwrap());
    assert_all_hold(&check_dg_lie_laws(&m, 4).unwrap());
}

#[test]
fn derivations_act_on_twisted_convolution() {
    let x = Arc::new(free(&[("a", 1), ("b", 2)], 7));
    let a = Arc::new(free(&[("b", 2)], 7));
    let i = LieMorphism::inclusion(a.clone(), x.clone()).unwrap();
    let conv = build_convolution(a, x.clone(), 3, None).unwrap();
    let tau = ce_convolution::tau_from_inclusion(&conv, &i).unwrap();
    let twisted = Arc::new(conv.twist(&tau).unwrap());
    let der = Arc::new(build_der(x, Some(3)).unwrap());
    let action = derivation_hom_action(der.clone(), twisted, tau.clone()).unwrap();
    let report = check_outer_axioms(&action, 3).unwrap();
    assert!(report.holds(), "{:?}", report.first_failure());
    let untwisted = derivation_hom_action(der, Arc::new(conv), SparseVec::new()).unwrap();
    let report = check_outer_axioms(&untwisted, 3).unwrap();
    assert!(report.holds(), "{:?}", report.first_failure());
}
