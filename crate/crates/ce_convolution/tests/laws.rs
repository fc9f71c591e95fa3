mod common;

use std::sync::Arc;

use ce_convolution::*;
use common::*;
use exactlin::{Rational, SparseVec};
use proptest::prelude::*;

fn generators() -> impl Strategy<Value = Vec<(String, i64)>> {
    prop::collection::vec(1i64..=3, 1..=3).prop_map(|ds| {
        ds.into_iter()
            .enumerate()
            .map(|(i, d)| (format!("g{i}"), d))
            .collect()
    })
}

fn random_vec(dim: usize, seed: &[i64]) -> SparseVec {
    SparseVec::from_entries(
        seed.iter()
            .enumerate()
            .take(dim)
            .map(|(i, c)| (i, Rational::from_integer(*c))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ce_laws_on_random_free_algebras(gens in generators()) {
        let refs: Vec<(&str, i64)> = gens.iter().map(|(n, d)| (n.as_str(), *d)).collect();
        let ce = build_ce(Arc::new(free(&refs, 6)), 7, true).unwrap();
        prop_assert!(ce.check_coassociativity().holds);
        prop_assert!(ce.check_cocommutativity().holds);
        prop_assert!(ce.check_coderivation().holds);
        let pi = universal_twisting(Arc::new(ce)).unwrap();
        prop_assert!(pi.verify().is_ok());
    }

    #[test]
    fn twisted_differential_squares_to_zero(seed in prop::collection::vec(-3i64..=3, 0..8)) {
        let a = Arc::new(cp(1, 12));
        let x = Arc::new(cp(2, 12));
        let i = gla_free::LieMorphism::inclusion(a.clone(), x.clone()).unwrap();
        let conv = build_convolution(a, x, 5, Some(4)).unwrap();
        let tau = tau_from_inclusion(&conv, &i).unwrap();
        let tw = conv.twist(&tau).unwrap();
        let (lo, hi) = tw.valid_range();
        for n in (lo + 2)..=hi {
            let f = random_vec(tw.dim(n).unwrap(), &seed);
            let dd = tw.differential(n - 1, &tw.differential(n, &f).unwrap()).unwrap();
            prop_assert!(dd.is_zero(), "degree {}", n);
        }
    }

    #[test]
    fn convolution_bracket_is_graded_antisymmetric(
        s1 in prop::collection::vec(-2i64..=2, 0..6),
        s2 in prop::collection::vec(-2i64..=2, 0..6),
        p in -2i64..=1,
        r in -2i64..=1,
    ) {
        let conv = build_convolution(Arc::new(disk_ab(9)), Arc::new(cp(2, 9)), 5, Some(2)).unwrap();
        let (lo, hi) = conv.valid_range();
        prop_assume!(p >= lo && r >= lo && p + r >= lo && p <= hi && r <= hi && p + r <= hi);
        let f = random_vec(conv.dim(p).unwrap(), &s1);
        let g = random_vec(conv.dim(r).unwrap(), &s2);
        let fg = conv.bracket(p, &f, r, &g).unwrap();
        let gf = conv.bracket(r, &g, p, &f).unwrap();
        let sign = Rational::sign(p * r + 1);
        prop_assert_eq!(fg, gf.scale(&sign));
    }
}
