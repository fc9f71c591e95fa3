mod common;

use std::sync::Arc;

use actions_semidirect::{check_outer_axioms, derivation_hom_action, OuterAction};
use ce_convolution::{build_convolution, tau_from_inclusion, ConvolutionDgLie, WordValues};
use common::*;
use derivations::{build_der, DerivationComplex};
use exactlin::{kernel, Rational, SparseVec};
use gla_free::{differential_matrix, DgLieAlgebra, FreeGradedLie, LieElement, LieMorphism};
use mc_gauge::*;

/// `Hom(C̄L(x1), L(x1,x2))` for `CP¹ ⊂ CP²` and its `τ`.
fn projective_conv(word_cutoff: i64) -> (Arc<ConvolutionDgLie>, SparseVec) {
    let a = Arc::new(cp(1, word_cutoff + 2));
    let x = Arc::new(cp(2, word_cutoff + 2));
    let i = LieMorphism::inclusion(a.clone(), x.clone()).unwrap();
    let conv = build_convolution(a, x, word_cutoff, Some(1)).unwrap();
    let tau = tau_from_inclusion(&conv, &i).unwrap();
    (Arc::new(conv), tau)
}

fn degree_zero_cycles(conv: &ConvolutionDgLie) -> Vec<SparseVec> {
    kernel(&differential_matrix(conv, 0).unwrap())
}

/// `X = L(a,b)`, `|a| = 1`, `|b| = 2`, `d = 0`, with `A = L(b)`: the
/// twisted `Hom^τ(C̄A, X)`, `Der(X)` acting through `ξ = τ_*`, and the
/// nilpotent derivation `ν: b ↦ [a,a]`.
struct NuFixture {
    x: Arc<FreeGradedLie>,
    twisted: Arc<ConvolutionDgLie>,
    tau: SparseVec,
    der: Arc<DerivationComplex>,
    action: OuterAction<DerivationComplex, ConvolutionDgLie>,
    nu: SparseVec,
}

fn nu_fixture() -> NuFixture {
    let x = Arc::new(free(&[("a", 1), ("b", 2)], 6));
    let a = Arc::new(free(&[("b", 2)], 6));
    let i = LieMorphism::inclusion(a.clone(), x.clone()).unwrap();
    let conv = build_convolution(a, x.clone(), 3, Some(1)).unwrap();
    let tau = tau_from_inclusion(&conv, &i).unwrap();
    let twisted = Arc::new(conv.twist(&tau).unwrap());
    let der = Arc::new(build_der(x.clone(), Some(1)).unwrap());
    let action = derivation_hom_action(der.clone(), twisted.clone(), tau.clone()).unwrap();
    let ga = x.generator("a").unwrap();
    let nu = der.from_values(0, [("b", br(&ga, &ga))]).unwrap();
    NuFixture {
        x,
        twisted,
        tau,
        der,
        action,
        nu,
    }
}

impl NuFixture {
    /// `sb ↦ v` in degree −1.
    fn on_sb(&self, v: &LieElement) -> SparseVec {
        let sb = self.twisted.coalgebra().suspension(2, 0).unwrap();
        let coords = self.x.coordinates(v).unwrap();
        self.twisted.from_values(-1, &WordValues::from([(sb, coords)])).unwrap()
    }

    fn point(&self, lambda: i64, mu: i64) -> SparseVec {
        let a = self.x.generator("a").unwrap();
        let b = self.x.generator("b").unwrap();
        let v = b.scale(&Rational::from_integer(lambda)).add(&br(&a, &a).scale(&Rational::from_integer(mu)));
        self.on_sb(&v.unwrap())
    }
}

#[test]
fn maurer_cartan_examples() {
    let (conv, tau) = projective_conv(5);
    assert!(is_mc(conv.as_ref(), &SparseVec::new()).unwrap().holds);
    let v = is_mc(conv.as_ref(), &tau).unwrap();
    assert!(v.holds && v.residual.is_zero());
    // perturbing τ along a basis vector
    let mut failures = 0;
    for j in 0..conv.dim(-1).unwrap() {
        let v = is_mc(conv.as_ref(), &tau.add(&SparseVec::unit(j))).unwrap();
        assert_eq!(v.holds, v.residual.is_zero());
        failures += usize::from(!v.holds);
    }
    assert!(failures > 0);
    let bad = tau.add(&SparseVec::unit(0));
    if !is_mc(conv.as_ref(), &bad).unwrap().holds {
        assert!(matches!(
            McElement::new(conv.clone(), bad),
            Err(GaugeError::NotMaurerCartan(_))
        ));
    }
    let l = cp(2, 6);
    assert!(is_mc(&l, &SparseVec::new()).unwrap_err().is_range_error());
}

#[test]
fn bch_small_cases() {
    // abelian
    let f = nu_fixture();
    let zero_class: Vec<SparseVec> = (0..f.twisted.dim(0).unwrap()).map(SparseVec::unit).collect();
    if zero_class.len() >= 2 {
        let z = bch_series(f.twisted.as_ref(), &zero_class[0], &zero_class[1], 1).unwrap();
        assert_eq!(z, zero_class[0].add(&zero_class[1]));
    }
    // class 2: 3 × 3 upper triangular
    let h = UpperTriangular { n: 3 };
    let (x, y) = (SparseVec::unit(0), SparseVec::unit(2));
    let z = bch_series(&h, &x, &y, 2).unwrap();
    let xy = h.bracket(0, &x, 0, &y).unwrap();
    assert_eq!(z, x.add(&y).add_scaled(&xy, &q(1, 2)));
    assert!(!xy.is_zero());
    // inverse
    let x = SparseVec::from_entries([(0, q(1, 1)), (1, q(-2, 3)), (2, q(5, 1))]);
    assert!(bch_series(&h, &x, &x.neg(), 2).unwrap().is_zero());
}

#[test]
fn dynkin_series_matches_matrix_logarithm() {
    for n in [4, 5, 7] {
        let h = UpperTriangular { n };
        let d = h.dim(0).unwrap();
        let x = SparseVec::from_entries((0..d).map(|i| (i, q((i as i64 % 5) - 2, 1 + i as i64 % 3))));
        let y = SparseVec::from_entries((0..d).map(|i| (i, q(1 + (i as i64 * 7) % 4, 2))));
        let oracle = h.from_matrix(&mat_log_unipotent(&mat_mul(
            &mat_exp(&h.to_matrix(&x)),
            &mat_exp(&h.to_matrix(&y)),
        )));
        assert_eq!(bch_series(&h, &x, &y, n - 1).unwrap(), oracle, "n = {n}");
    }
}

#[test]
fn class_bounds_are_enforced() {
    let h = UpperTriangular { n: 5 };
    let x = SparseVec::from_entries([(0, q(1, 1)), (4, q(1, 1)), (7, q(1, 1))]);
    let y = SparseVec::from_entries([(4, q(1, 1)), (7, q(1, 1)), (9, q(1, 1))]);
    assert!(bch_series(&h, &x, &y, 4).is_ok());
    // E01 + E12 + E23 and E12 + E23 + E34: a length-4 bracket reaches E04
    assert!(matches!(
        bch_series(&h, &x, &y, 3),
        Err(GaugeError::NilpotencyBoundExceeded { bound: 3, .. })
    ));
    let big = UpperTriangular { n: 9 };
    assert!(matches!(
        bch_series(&big, &SparseVec::unit(0), &SparseVec::unit(1), 7),
        Err(GaugeError::ClassBoundTooLarge { bound: 7, max: 6 })
    ));
}

#[test]
fn group_elements_record_nilpotency() {
    let h = Arc::new(UpperTriangular { n: 4 });
    let e01 = GroupElement::new(h.clone(), SparseVec::unit(0), 6).unwrap();
    // ad_{E01} sends E12 ↦ E02 ↦ 0 and E13 ↦ 0
    assert_eq!(e01.nilpotency(), 2);
    let sum = SparseVec::from_entries([(0, q(1, 1)), (3, q(1, 1)), (5, q(1, 1))]);
    let g = GroupElement::new(h.clone(), sum.clone(), 6).unwrap();
    assert_eq!(g.nilpotency(), 3);
    assert!(matches!(
        GroupElement::new(h.clone(), sum, 2),
        Err(GaugeError::NilpotencyBoundExceeded { .. })
    ));
    let prod = bch(&e01, &g, 3).unwrap();
    assert_eq!(prod.ambient().as_ref().n, 4);
    // a non-cycle in a convolution algebra
    let (conv, _) = projective_conv(5);
    let non_cycle = (0..conv.dim(0).unwrap())
        .map(SparseVec::unit)
        .find(|v| !conv.differential(0, v).unwrap().is_zero())
        .unwrap();
    assert!(matches!(GroupElement::new(conv, non_cycle, 6), Err(GaugeError::NotACycle(_))));
}

#[test]
fn inner_gauge_action_on_convolution() {
    let (conv, tau) = projective_conv(7);
    let tau = McElement::new(conv.clone(), tau).unwrap();
    let zero = McElement::zero(conv.clone()).unwrap();
    let one = GroupElement::identity(conv.clone()).unwrap();
    assert_eq!(gauge_act(&one, &tau).unwrap(), tau);
    let cycles = degree_zero_cycles(&conv);
    assert!(!cycles.is_empty());
    let elems: Vec<GroupElement<ConvolutionDgLie>> = cycles
        .iter()
        .map(|c| GroupElement::new(conv.clone(), c.clone(), 6).unwrap())
        .collect();
    let mut moved = 0;
    for x in &elems {
        // basepoint: ξ = 0
        assert_eq!(gauge_act(x, &zero).unwrap(), zero);
        let out = gauge_act(x, &tau).unwrap();
        assert!(is_mc(conv.as_ref(), out.coords()).unwrap().holds);
        moved += usize::from(out != tau);
        for y in &elems {
            let xy = bch(x, y, 4).unwrap();
            let lhs = gauge_act(&xy, &tau).unwrap();
            let rhs = gauge_act(x, &gauge_act(y, &tau).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
    assert!(moved > 0);
}

#[test]
fn outer_action_with_only_xi() {
    // θ_x = 0: only the n = 0 term survives, exp(x).a = a − ξ(x)
    let f = nu_fixture();
    let only_xi = OuterAction::trivial(f.der.clone(), f.twisted.clone()).with_xi(f.action.xi_fn().clone());
    let a = McElement::new(f.twisted.clone(), f.point(1, 2)).unwrap();
    let xi = f.action.xi(0, &f.nu).unwrap();
    assert!(!xi.is_zero());
    let out = outer_gauge_act(&only_xi, &f.nu, &a, 4).unwrap();
    assert_eq!(out.coords(), &a.coords().sub(&xi));
}

#[test]
fn outer_action_along_a_nilpotent_derivation() {
    let f = nu_fixture();
    assert!(check_outer_axioms(&f.action, 1).unwrap().holds());
    let ga = f.x.generator("a").unwrap();
    let aa = br(&ga, &ga);
    // exp(ν).0 = e^ν∘τ − τ = (sb ↦ [a,a])
    let zero = McElement::zero(f.twisted.clone()).unwrap();
    let out = outer_gauge_act(&f.action, &f.nu, &zero, 4).unwrap();
    assert_eq!(out.coords(), &f.on_sb(&aa));
    // exp(tν).(λb + μ[a,a]) = λb + (μ + t(λ + 1))[a,a]
    for (t, lambda, mu) in [(1, 0, 0), (2, 1, -1), (-1, -1, 3), (3, 2, 1)] {
        let x = f.nu.scale(&Rational::from_integer(t));
        let a = McElement::new(f.twisted.clone(), f.point(lambda, mu)).unwrap();
        let out = outer_gauge_act(&f.action, &x, &a, 4).unwrap();
        assert_eq!(out.coords(), &f.point(lambda, mu + t * (lambda + 1)), "t = {t}");
    }
    // ξ = 0 on the untwisted algebra fixes the basepoint
    let conv = Arc::new(
        build_convolution(Arc::new(free(&[("b", 2)], 6)), f.x.clone(), 3, Some(1)).unwrap(),
    );
    let untwisted = derivation_hom_action(f.der.clone(), conv.clone(), SparseVec::new()).unwrap();
    let zero = McElement::zero(conv).unwrap();
    assert_eq!(outer_gauge_act(&untwisted, &f.nu, &zero, 4).unwrap(), zero);
    assert_eq!(f.tau.nnz(), 1);
}

#[test]
fn outer_action_property_for_noncommuting_derivations() {
    // X = L(a, e, b, c), |a| = |e| = 1, |b| = 2, |c| = 3, d = 0, A = L(c);
    // ν₁: b ↦ [a,e] and ν₂: c ↦ [a,b] do not commute
    let x = Arc::new(free(&[("a", 1), ("e", 1), ("b", 2), ("c", 3)], 8));
    let a = Arc::new(free(&[("c", 3)], 8));
    let i = LieMorphism::inclusion(a.clone(), x.clone()).unwrap();
    let conv = build_convolution(a, x.clone(), 4, Some(1)).unwrap();
    let tau = tau_from_inclusion(&conv, &i).unwrap();
    let twisted = Arc::new(conv.twist(&tau).unwrap());
    let der = Arc::new(build_der(x.clone(), Some(1)).unwrap());
    let action = derivation_hom_action(der.clone(), twisted.clone(), tau).unwrap();
    let g = |n: &str| x.generator(n).unwrap();
    let nu1 = der.from_values(0, [("b", br(&g("a"), &g("e")))]).unwrap();
    let nu2 = der.from_values(0, [("c", br(&g("a"), &g("b")))]).unwrap();
    assert!(!der.bracket(0, &nu1, 0, &nu2).unwrap().is_zero());
    let base = McElement::zero(twisted.clone()).unwrap();
    let start = outer_gauge_act(&action, &nu2, &base, 6).unwrap();
    for a in [base, start] {
        for (u, v) in [(&nu1, &nu2), (&nu2, &nu1), (&nu1, &nu1)] {
            let uv = bch_series(der.as_ref(), u, v, 4).unwrap();
            let lhs = outer_gauge_act(&action, &uv, &a, 6).unwrap();
            let inner = outer_gauge_act(&action, v, &a, 6).unwrap();
            let rhs = outer_gauge_act(&action, u, &inner, 6).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn gauge_orbits_on_a_one_parameter_family() {
    let f = nu_fixture();
    let mut grid = Vec::new();
    for lambda in -2..=1 {
        for mu in -2..=2 {
            grid.push((lambda, mu));
        }
    }
    let points: Vec<SparseVec> = grid.iter().map(|&(l, m)| f.point(l, m)).collect();
    let steps = [q(1, 1), q(-1, 1), q(2, 1), q(-2, 1), q(1, 2), q(-1, 2)];
    let moves: Vec<SparseVec> = steps.iter().map(|t| f.nu.scale(t)).collect();
    let act = |x: &SparseVec, p: &SparseVec| -> Result<SparseVec, GaugeError> {
        let a = McElement::new(f.twisted.clone(), p.clone())?;
        Ok(outer_gauge_act(&f.action, x, &a, 4)?.coords().clone())
    };
    let orbits = orbit_partition(&points, |p| moves.iter().map(|x| act(x, p)).collect()).unwrap();
    // λ ≠ −1 sweeps out every μ; λ = −1 is fixed
    assert_eq!(orbits.blocks.len(), 8);
    for (i, &(l, _)) in grid.iter().enumerate() {
        for (j, &(m, _)) in grid.iter().enumerate() {
            let expected = i == j || (l == m && l != -1);
            assert_eq!(orbits.same_orbit(i, j), expected, "{:?} {:?}", grid[i], grid[j]);
        }
    }
    // symmetry and transitivity of the computed moves
    for p in &points {
        for x in &moves {
            let img = act(x, p).unwrap();
            assert_eq!(&act(&x.neg(), &img).unwrap(), p);
            for y in &moves {
                let twice = act(y, &img).unwrap();
                let yx = bch_series(f.der.as_ref(), y, x, 4).unwrap();
                assert_eq!(act(&yx, p).unwrap(), twice);
            }
        }
    }
}
