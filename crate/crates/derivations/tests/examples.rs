mod common;

use std::sync::Arc;

use common::*;
use derivations::*;
use exactlin::{homology, rank, solve, SparseMatrix, SparseVec};
use gla_free::{check_dg_lie_laws, ConnectiveCover, DgLieAlgebra, LieElement, LieMorphism};

fn arc(l: gla_free::FreeGradedLie) -> Arc<gla_free::FreeGradedLie> {
    Arc::new(l)
}

fn dims(der: &DerivationComplex) -> Vec<(i64, usize)> {
    let (lo, hi) = der.valid_range();
    (lo..=hi).map(|n| (n, der.dim(n).unwrap())).collect()
}

#[test]
fn abelian_sphere_has_only_the_identity_scaling() {
    let l = arc(free(&[("u", 2)], 6));
    let der = build_der(l, None).unwrap();
    assert_eq!(der.valid_range(), (-2, 4));
    for (n, d) in dims(&der) {
        assert_eq!(d, usize::from(n == 0), "degree {n}");
    }
    assert_eq!(der.labels(0).unwrap(), vec!["u->u".to_string()]);
}

#[test]
fn the_differential_viewed_as_a_derivation_is_a_cycle() {
    let l = arc(cp(3, 9));
    let der = build_der(l.clone(), None).unwrap();
    let values: Vec<(String, LieElement)> = l
        .generator_names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), l.d_of_generator(i)))
        .collect();
    let d = der.from_values(-1, values).unwrap();
    assert!(!d.is_zero());
    assert!(der.differential(-1, &d).unwrap().is_zero());
}

#[test]
fn disk_derivations_in_degree_two() {
    let l = arc(disk_ab(4));
    let der = build_der(l.clone(), Some(2)).unwrap();
    assert_eq!(der.dim(2).unwrap(), 2);
    assert_eq!(l.dim(3).unwrap(), 1);
    assert_eq!(l.dim(4).unwrap(), 1);
}

#[test]
fn relative_derivations_live_on_the_new_generator() {
    let x = arc(disk_uv(10));
    let a = arc(free(&[("u", 2)], 10));
    let i = LieMorphism::inclusion(a, x.clone()).unwrap();
    let rel = build_rel_der(&i, None).unwrap();
    assert_eq!(rel.slots().len(), 1);
    assert_eq!(rel.slots()[0].name, "v");
    for (n, d) in dims(&rel) {
        assert_eq!(d, x.dim(n + 3).unwrap(), "degree {n}");
    }
}

#[test]
fn projective_space_pairs_give_a_shifted_copy() {
    for k in 1..=3usize {
        let shift = 2 * k as i64 + 1;
        let big = arc(cp(k + 1, 12 + k as i64));
        let small = arc(cp(k, 12 + k as i64));
        let i = LieMorphism::inclusion(small, big.clone()).unwrap();
        let rel = build_rel_der(&i, None).unwrap();
        let top = format!("x{}", k + 1);
        let (lo, hi) = rel.valid_range();
        assert_eq!(lo, -shift);
        for n in lo..=hi {
            assert_eq!(rel.dim(n).unwrap(), big.dim(n + shift).unwrap());
            let e = rel.evaluation_matrix(n, &top).unwrap();
            assert_eq!(rank(&e), rel.dim(n).unwrap());
            if n > lo {
                let lhs = rel.evaluation_matrix(n - 1, &top).unwrap().compose(rel.complex().d(n).unwrap());
                let rhs = big.d_matrix(n + shift).unwrap().compose(&e);
                assert_eq!(lhs, rhs, "k = {k}, degree {n}");
            }
        }
    }
}

#[test]
fn non_free_map_is_refused() {
    let l = arc(disk_ab(6));
    let s = arc(free(&[("u", 2)], 6));
    let aa = br(&l.generator("a").unwrap(), &l.generator("a").unwrap());
    let j = LieMorphism::new(s, l, [("u", aa)]).unwrap();
    let err = build_rel_der(&j, None).unwrap_err();
    assert!(matches!(err, DerError::NotAFreeExtension(_)));
    assert!(err.to_string().contains("cofibration"));
}

#[test]
fn vanishing_on_nothing_is_everything() {
    let l = arc(cp(2, 10));
    let full = build_der(l.clone(), None).unwrap();
    let van = build_vanishing_der(l, Vec::new(), None).unwrap();
    assert_eq!(dims(&full), dims(&van));
    let (lo, hi) = full.valid_range();
    for n in (lo + 1)..=hi {
        assert_eq!(full.complex().d(n).unwrap(), van.complex().d(n).unwrap());
    }
}

#[test]
fn adjoint_in_the_disk_example_is_a_cycle_but_not_a_boundary() {
    let l = arc(disk_ab(5));
    let a = l.generator("a").unwrap();
    let b = l.generator("b").unwrap();
    let aa = br(&a, &a);
    let van = build_vanishing_der(l.clone(), vec![aa.clone()], Some(3)).unwrap();
    let ad_a = adjoint(&van, &a).unwrap();
    let values = van.derivation(1, &ad_a).unwrap().values;
    assert_eq!(values[0], ("a".to_string(), aa.clone()));
    assert_eq!(values[1], ("b".to_string(), br(&a, &b)));
    assert!(van.differential(1, &ad_a).unwrap().is_zero());
    let d2 = van.complex().d(2).unwrap();
    assert!(solve(d2, &SparseMatrix::from_columns(d2.rows(), vec![ad_a.clone()])).is_none());
    let h = homology(van.complex(), 1, 1).unwrap();
    assert_eq!(h.get(1).unwrap().dim, 1);

    // In all of Der, D g = ad_a is solvable and every solution takes
    // a ↦ [b,a] with coefficient 1 and fails to kill [a,a].
    let full = build_der(l.clone(), Some(3)).unwrap();
    let ad_full = adjoint(&full, &a).unwrap();
    let d2 = full.complex().d(2).unwrap();
    let sol = solve(d2, &SparseMatrix::from_columns(d2.rows(), vec![ad_full])).unwrap();
    let g2 = &sol[0];
    let ba = br(&b, &a);
    let ga = full.apply(2, g2, &a).unwrap();
    assert_eq!(ga, ba);
    for z in exactlin::kernel(d2) {
        let shifted = g2.add(&z);
        assert_eq!(full.apply(2, &shifted, &a).unwrap(), ba);
        let expected = br(&ba, &a).scale(&q(2, 1));
        assert_eq!(full.apply(2, &shifted, &aa).unwrap(), expected);
    }
    assert_eq!(full.apply(2, g2, &aa).unwrap(), br(&ba, &a).scale(&q(2, 1)));
    assert!(matches!(
        van.from_values(2, full.derivation(2, g2).unwrap().values),
        Err(DerError::NotInComplex(_))
    ));
}

#[test]
fn identity_f_derivations_match_full() {
    let l = arc(cp(2, 10));
    let full = build_der(l.clone(), None).unwrap();
    let id = LieMorphism::identity(l);
    let fd = build_f_der(&id, None).unwrap();
    assert_eq!(dims(&full), dims(&fd));
    let (lo, hi) = full.valid_range();
    for n in (lo + 1)..=hi {
        assert_eq!(full.complex().d(n).unwrap(), fd.complex().d(n).unwrap());
    }
    assert!(matches!(
        fd.bracket(0, &SparseVec::new(), 0, &SparseVec::new()),
        Err(DerError::Unsupported(_))
    ));
}

#[test]
fn f_derivations_of_a_sphere_into_a_disk() {
    let x = arc(disk_uv(10));
    let a = arc(free(&[("u", 2)], 10));
    let i = LieMorphism::inclusion(a, x.clone()).unwrap();
    let fd = build_f_der(&i, None).unwrap();
    for (n, d) in dims(&fd) {
        assert_eq!(d, x.dim(n + 2).unwrap());
    }
}

#[test]
fn restriction_sequence_with_empty_subalgebra() {
    let x = arc(cp(2, 10));
    let a = arc(free(&[], 10));
    let i = LieMorphism::inclusion(a, x.clone()).unwrap();
    let ses = restriction_ses(&i, None).unwrap();
    assert!(ses.is_exact());
    assert_eq!(dims(&ses.relative), dims(&ses.full));
    assert!(ses.degrees.iter().all(|d| d.dims.2 == 0));
}

#[test]
fn restriction_sequences_are_exact() {
    let d4 = arc(disk_uv(13));
    let s3 = arc(free(&[("u", 2)], 13));
    let cp2 = arc(cp(2, 13));
    let cp1 = arc(cp(1, 13));
    for (a, x) in [(s3, d4), (cp1, cp2)] {
        let i = LieMorphism::inclusion(a, x).unwrap();
        let ses = restriction_ses(&i, Some(10)).unwrap();
        assert!(ses.inclusion_is_chain_map && ses.restriction_is_chain_map);
        for d in ses.degrees.iter().filter(|d| (1..=10).contains(&d.degree)) {
            assert!(d.exact(), "{d:?}");
        }
        assert!(ses.truncated_surjective_in_degree_one().is_some());
    }
}

#[test]
fn adjoint_laws() {
    let l = arc(cp(3, 12));
    let der = build_der(l.clone(), Some(5)).unwrap();
    for n in 1..=5 {
        for x in l.lie_basis(n).unwrap() {
            let ad = adjoint(&der, &x).unwrap();
            let dx = l.apply_d(&x).unwrap();
            let ad_dx = adjoint(&der, &dx).unwrap();
            assert_eq!(der.differential(n, &ad).unwrap(), ad_dx);
        }
    }
    let x1 = l.generator("x1").unwrap();
    let x2 = l.generator("x2").unwrap();
    let lhs = adjoint(&der, &br(&x1, &x2)).unwrap();
    let rhs = der
        .bracket(1, &adjoint(&der, &x1).unwrap(), 3, &adjoint(&der, &x2).unwrap())
        .unwrap();
    assert_eq!(lhs, rhs);
    let u = arc(free(&[("u", 2)], 6));
    let du = build_der(u.clone(), None).unwrap();
    assert!(adjoint(&du, &u.generator("u").unwrap()).unwrap().is_zero());
}

#[test]
fn derivation_algebra_satisfies_the_dg_lie_laws() {
    let l = arc(cp(2, 9));
    let der = build_der(l, Some(4)).unwrap();
    for check in check_dg_lie_laws(&der, 4).unwrap() {
        assert!(check.holds, "{check:?}");
    }
}

#[test]
fn connective_cover_of_relative_derivations() {
    let big = arc(cp(2, 13));
    let small = arc(cp(1, 13));
    let i = LieMorphism::inclusion(small, big).unwrap();
    let rel = Arc::new(build_rel_der(&i, None).unwrap());
    let cover = ConnectiveCover::new(rel.clone(), 1).unwrap();
    assert_eq!(cover.valid_range().0, 0);
    let ranks: Vec<usize> = (1..=6).map(|n| cover.dim(n).unwrap()).collect();
    assert!(ranks.iter().all(|&r| r <= rel.dim(1).unwrap().max(r)));
    assert!(cover.dim(1).unwrap() <= rel.dim(1).unwrap());
}

#[test]
fn out_of_range_requests_are_refused() {
    let l = arc(cp(2, 8));
    assert!(build_der(l.clone(), Some(6)).unwrap_err().is_range_error());
    let der = build_der(l, None).unwrap();
    assert_eq!(der.valid_range(), (-3, 5));
    assert!(der.dim(6).unwrap_err().is_range_error());
}
