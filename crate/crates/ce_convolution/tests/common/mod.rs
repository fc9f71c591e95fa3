#![allow(dead_code)]

use exactlin::Rational;
use gla_free::{FreeGradedLie, GeneratorSet, LieElement};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn free(gens: &[(&str, i64)], cutoff: i64) -> FreeGradedLie {
    FreeGradedLie::free(GeneratorSet::new(gens.iter().copied()).unwrap(), cutoff).unwrap()
}

/// `L(x_1,…,x_k)`, `|x_i| = 2i − 1`, `d x_i = ½ Σ_{p+q=i} [x_p, x_q]`.
pub fn cp(k: usize, cutoff: i64) -> FreeGradedLie {
    let names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    let gens =
        GeneratorSet::new(names.iter().enumerate().map(|(i, n)| (n.clone(), 2 * i as i64 + 1))).unwrap();
    let x: Vec<LieElement> = names
        .iter()
        .map(|n| LieElement::generator(&gens, n).unwrap())
        .collect();
    let mut d = Vec::new();
    for i in 2..=k {
        let mut sum = LieElement::zero(2 * i as i64 - 2);
        for p in 1..i {
            let b = LieElement::commutator(&x[p - 1], &x[i - p - 1]);
            sum = sum.add(&b.scale(&q(1, 2))).unwrap();
        }
        d.push((names[i - 1].clone(), sum));
    }
    FreeGradedLie::new(gens, d, cutoff).unwrap()
}

/// Builds `L(gens)` with `d` given as `(generator, element)` pairs, where
/// elements are produced from the generator set by `diff`.
pub fn dgl(
    gens: &[(&str, i64)],
    diff: impl Fn(&GeneratorSet) -> Vec<(&'static str, LieElement)>,
    cutoff: i64,
) -> FreeGradedLie {
    let set = GeneratorSet::new(gens.iter().copied()).unwrap();
    let d = diff(&set);
    FreeGradedLie::new(set, d, cutoff).unwrap()
}

pub fn g(set: &GeneratorSet, name: &str) -> LieElement {
    LieElement::generator(set, name).unwrap()
}

pub fn br(x: &LieElement, y: &LieElement) -> LieElement {
    LieElement::commutator(x, y)
}

/// `L(a,b)`, `|a| = 1`, `|b| = 2`, `db = a`.
pub fn disk_ab(cutoff: i64) -> FreeGradedLie {
    dgl(&[("a", 1), ("b", 2)], |s| vec![("b", g(s, "a"))], cutoff)
}

/// `L(u,v)`, `|u| = 2`, `|v| = 3`, `dv = u`.
pub fn disk_uv(cutoff: i64) -> FreeGradedLie {
    dgl(&[("u", 2), ("v", 3)], |s| vec![("v", g(s, "u"))], cutoff)
}
