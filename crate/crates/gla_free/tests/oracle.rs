//! Dimensions and bases cross-checked against a brute-force span of
//! left-normed bracket monomials in the tensor algebra.

mod common;

use std::collections::HashMap;

use exactlin::{span_rank, Rational, SparseVec};
use gla_free::tensor::word_degree;
use gla_free::*;
use proptest::prelude::*;

fn words_of_degree(degs: &[i64], n: i64) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (l, &d) in degs.iter().enumerate() {
        if d <= n {
            for mut w in words_of_degree(degs, n - d) {
                w.insert(0, l as u8);
                out.push(w);
            }
        }
    }
    out
}

fn left_normed(word: &[u8], degs: &[i64]) -> TensorPoly {
    let mut acc = TensorPoly::letter(word[0]);
    let mut deg = degs[word[0] as usize];
    for &l in &word[1..] {
        let d = degs[l as usize];
        acc = TensorPoly::commutator(&acc, deg, &TensorPoly::letter(l), d);
        deg += d;
    }
    acc
}

struct WordIndex(HashMap<Vec<u8>, usize>);

impl WordIndex {
    fn vector(&mut self, p: &TensorPoly) -> SparseVec {
        let mut entries = Vec::new();
        for (w, c) in p.terms() {
            let next = self.0.len();
            let i = *self.0.entry(w.to_vec()).or_insert(next);
            entries.push((i, c.clone()));
        }
        SparseVec::from_entries(entries)
    }
}

/// Dimension of the span of left-normed brackets of degree `n`, and the
/// dimension after adjoining the algebra's basis.
fn oracle(l: &FreeGradedLie, n: i64) -> (usize, usize) {
    let degs = l.letter_degrees();
    let mut idx = WordIndex(HashMap::new());
    let mut span: Vec<SparseVec> = words_of_degree(degs, n)
        .iter()
        .map(|w| idx.vector(&left_normed(w, degs)))
        .collect();
    let r0 = span_rank(&span, idx.0.len());
    for b in l.lie_basis(n).unwrap() {
        span.push(idx.vector(b.poly()));
    }
    let m = idx.0.len();
    (r0, span_rank(&span, m))
}

#[test]
fn fixed_cases_match_span_oracle() {
    let cases: Vec<(Vec<(&str, i64)>, i64)> = vec![
        (vec![("a", 1), ("b", 2)], 8),
        (vec![("a", 1), ("b", 1)], 7),
        (vec![("u", 2), ("v", 3)], 8),
        (vec![("x", 1), ("y", 3), ("z", 5)], 8),
        (vec![("u", 2), ("w", 2)], 8),
    ];
    for (gens, top) in cases {
        let l = common::free(&gens, top);
        for n in 1..=top {
            let (span, with_basis) = oracle(&l, n);
            assert_eq!(span, l.dim(n).unwrap(), "{gens:?} degree {n}");
            assert_eq!(with_basis, span, "{gens:?} degree {n}: basis outside span");
        }
    }
}

#[test]
fn coordinates_round_trip_on_left_normed_brackets() {
    let l = common::free(&[("a", 1), ("b", 2), ("c", 2)], 7);
    let degs = l.letter_degrees().to_vec();
    for n in 1..=7 {
        for w in words_of_degree(&degs, n) {
            let p = left_normed(&w, &degs);
            assert_eq!(word_degree(&w, &degs), n);
            let x = LieElement::from_poly(n, p.clone());
            let c = l.coordinates(&x).unwrap();
            assert_eq!(l.element(n, &c).unwrap().poly(), &p);
        }
    }
}

fn small_generator_sets() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=4, 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_generator_sets_match_span_oracle(degs in small_generator_sets()) {
        let names: Vec<String> = (0..degs.len()).map(|i| format!("g{i}")).collect();
        let gens: Vec<(&str, i64)> = names.iter().map(|s| s.as_str()).zip(degs.iter().copied()).collect();
        let l = common::free(&gens, 8);
        for n in 1..=8 {
            if words_of_degree(&degs, n).len() > 700 {
                break;
            }
            let (span, with_basis) = oracle(&l, n);
            prop_assert_eq!(span, l.dim(n).unwrap());
            prop_assert_eq!(with_basis, span);
        }
    }

    #[test]
    fn antisymmetry_and_jacobi_on_random_sets(degs in small_generator_sets()) {
        let names: Vec<String> = (0..degs.len()).map(|i| format!("g{i}")).collect();
        let gens: Vec<(&str, i64)> = names.iter().map(|s| s.as_str()).zip(degs.iter().copied()).collect();
        let l = common::free(&gens, 7);
        prop_assert!(check_antisymmetry(&l, 7).unwrap().holds);
        prop_assert!(check_jacobi(&l, 7).unwrap().holds);
    }

    #[test]
    fn bracket_is_bilinear_in_coordinates(
        degs in small_generator_sets(),
        c1 in -5i64..5, c2 in -5i64..5,
    ) {
        let names: Vec<String> = (0..degs.len()).map(|i| format!("g{i}")).collect();
        let gens: Vec<(&str, i64)> = names.iter().map(|s| s.as_str()).zip(degs.iter().copied()).collect();
        let l = common::free(&gens, 8);
        let p = degs[0];
        let x = SparseVec::unit(0);
        for q in 1..=(8 - p) {
            let dim = l.dim(q).unwrap();
            if dim == 0 { continue; }
            let y = SparseVec::from_entries([(0, Rational::from_integer(c1)), (dim - 1, Rational::from_integer(c2))]);
            let direct = l.bracket_coords(p, &x, q, &y).unwrap();
            let via_tensor = {
                let e = LieElement::commutator(&l.element(p, &x).unwrap(), &l.element(q, &y).unwrap());
                l.coordinates(&e).unwrap()
            };
            prop_assert_eq!(direct, via_tensor);
        }
    }
}
