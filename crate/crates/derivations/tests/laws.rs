mod common;

use std::sync::Arc;

use common::*;
use derivations::*;
use exactlin::SparseVec;
use gla_free::{check_dg_lie_laws, LieMorphism};
use proptest::prelude::*;

fn random_vec(dim: usize, seed: &[i64]) -> SparseVec {
    SparseVec::from_entries(
        (0..dim).map(|i| (i, q(seed[i % seed.len()] + i as i64 % 3 - 1, 1))),
    )
}

fn complexes() -> Vec<DerivationComplex> {
    let cp3 = Arc::new(cp(3, 11));
    let cp2 = Arc::new(cp(2, 11));
    let disk = Arc::new(disk_ab(7));
    let a = disk.generator("a").unwrap();
    let inc = LieMorphism::inclusion(cp2, cp3.clone()).unwrap();
    vec![
        build_der(cp3.clone(), None).unwrap(),
        build_rel_der(&inc, None).unwrap(),
        build_f_der(&inc, None).unwrap(),
        build_vanishing_der(disk, vec![br(&a, &a)], None).unwrap(),
    ]
}

#[test]
fn bracket_laws_hold_where_defined() {
    for der in complexes().into_iter().filter(|d| d.kind() != DerivationKind::FDerivations) {
        let top = der.valid_range().1.min(4);
        for check in check_dg_lie_laws(&der, top).unwrap() {
            assert!(check.holds, "{:?}: {check:?}", der.kind());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_squared_vanishes(which in 0usize..4, offset in 0i64..8, seed in prop::collection::vec(-3i64..4, 1..6)) {
        let der = &complexes()[which];
        let (lo, hi) = der.valid_range();
        let n = (lo + 2 + offset).min(hi);
        let x = random_vec(der.dim(n).unwrap(), &seed);
        let dx = der.differential(n, &x).unwrap();
        prop_assert!(der.differential(n - 1, &dx).unwrap().is_zero());
    }

    #[test]
    fn vanishing_brackets_still_vanish(p in 1i64..3, r in 1i64..3, seed in prop::collection::vec(-3i64..4, 1..6)) {
        let der = &complexes()[3];
        let s = &der.vanishing_elements()[0];
        let x = random_vec(der.dim(p).unwrap(), &seed);
        let y = random_vec(der.dim(r).unwrap(), &seed[1..].iter().chain(&seed[..1]).copied().collect::<Vec<_>>());
        let z = der.bracket(p, &x, r, &y).unwrap();
        prop_assert!(der.apply(p + r, &z, s).unwrap().is_zero());
        prop_assert!(der.apply(p, &x, s).unwrap().is_zero());
    }

    #[test]
    fn relative_brackets_kill_the_subalgebra(p in 0i64..3, r in 0i64..3, seed in prop::collection::vec(-3i64..4, 1..6)) {
        let der = &complexes()[1];
        let x = random_vec(der.dim(p).unwrap(), &seed);
        let y = random_vec(der.dim(r).unwrap(), &seed);
        let z = der.bracket(p, &x, r, &y).unwrap();
        let l = der.target();
        for name in ["x1", "x2"] {
            let g = l.generator(name).unwrap();
            prop_assert!(der.apply(p + r, &z, &g).unwrap().is_zero());
        }
    }
}
