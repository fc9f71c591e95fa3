//! Noncommutative polynomials in generator letters: the tensor algebra in
//! which free Lie algebras are embedded.

use std::collections::HashMap;
use std::fmt;

use exactlin::Rational;
use smallvec::SmallVec;

/// Sequence of generator indices.
pub type Word = SmallVec<[u8; 16]>;

pub fn word_degree(w: &[u8], letter_degrees: &[i64]) -> i64 {
    w.iter().map(|&l| letter_degrees[l as usize]).sum()
}

/// Rational combination of words, sorted by word, without zero terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TensorPoly {
    terms: Vec<(Word, Rational)>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn letter(l: u8) -> Self {
        Self::monomial(SmallVec::from_slice(&[l]), Rational::one())
    }

    pub fn monomial(w: Word, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TensorPoly { terms: vec![(w, c)] }
    }

    /// Sums repeated words and drops zeros.
    pub fn from_terms(items: impl IntoIterator<Item = (Word, Rational)>) -> Self {
        let mut acc = Accumulator::new();
        for (w, c) in items {
            acc.add(&w, &c);
        }
        acc.finish()
    }

    pub fn terms(&self) -> &[(Word, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[u8]) -> Rational {
        match self.terms.binary_search_by(|(u, _)| u.as_slice().cmp(w)) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Smallest word with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Rational)> {
        self.terms.first().map(|(w, c)| (w, c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TensorPoly {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &TensorPoly, c: &Rational) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (x, y) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut a, mut b) = (0, 0);
        while a < x.len() || b < y.len() {
            if b >= y.len() || (a < x.len() && x[a].0 < y[b].0) {
                out.push(x[a].clone());
                a += 1;
            } else if a >= x.len() || y[b].0 < x[a].0 {
                out.push((y[b].0.clone(), &y[b].1 * c));
                b += 1;
            } else {
                let v = &x[a].1 + &(&y[b].1 * c);
                if !v.is_zero() {
                    out.push((x[a].0.clone(), v));
                }
                a += 1;
                b += 1;
            }
        }
        TensorPoly { terms: out }
    }

    pub fn add(&self, other: &TensorPoly) -> Self {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &TensorPoly) -> Self {
        self.add_scaled(other, &-Rational::one())
    }

    /// Concatenation product.
    pub fn mul(&self, other: &TensorPoly) -> Self {
        let mut acc = Accumulator::with_capacity(self.len() * other.len());
        let mut buf = Word::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                buf.clear();
                buf.extend_from_slice(u);
                buf.extend_from_slice(v);
                acc.add(&buf, &(a * b));
            }
        }
        acc.finish()
    }

    /// Graded commutator `xy − (−1)^{pq} yx` of homogeneous `x` (degree `p`)
    /// and `y` (degree `q`).
    pub fn commutator(x: &TensorPoly, p: i64, y: &TensorPoly, q: i64) -> Self {
        let mut acc = Accumulator::with_capacity(2 * x.len() * y.len());
        commutator_terms(x, p, y, q, &mut |w, c| acc.add(w, &c));
        acc.finish()
    }

    pub fn max_letter(&self) -> Option<u8> {
        self.terms.iter().flat_map(|(w, _)| w.iter().copied()).max()
    }

    /// Renders with generator names, e.g. `2 a.a - b.a`.
    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let word: Vec<&str> = w.iter().map(|&l| names[l as usize].as_str()).collect();
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag} "));
            }
            out.push_str(&word.join("."));
        }
        out
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_letter().unwrap_or(0))
            .map(|l| format!("g{l}"))
            .collect();
        write!(f, "{}", self.display(&names))
    }
}

/// Hash-based accumulator of word coefficients.
#[derive(Default)]
pub struct Accumulator {
    map: HashMap<Word, Rational>,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Accumulator {
            map: HashMap::with_capacity(n),
        }
    }

    pub fn add(&mut self, w: &[u8], c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(w) {
            Some(v) => *v += c,
            None => {
                self.map.insert(SmallVec::from_slice(w), c.clone());
            }
        }
    }

    pub fn add_poly(&mut self, p: &TensorPoly, c: &Rational) {
        for (w, v) in p.terms() {
            self.add(w, &(v * c));
        }
    }

    pub fn finish(self) -> TensorPoly {
        let mut terms: Vec<(Word, Rational)> =
            self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        TensorPoly { terms }
    }
}

/// Streams the terms of `xy − (−1)^{pq} yx`.
pub fn commutator_terms(
    x: &TensorPoly,
    p: i64,
    y: &TensorPoly,
    q: i64,
    sink: &mut dyn FnMut(&[u8], Rational),
) {
    let sign = Rational::sign(p * q + 1);
    let mut buf: Vec<u8> = Vec::new();
    for (u, a) in x.terms() {
        for (v, b) in y.terms() {
            let ab = a * b;
            buf.clear();
            buf.extend_from_slice(u);
            buf.extend_from_slice(v);
            sink(&buf, ab.clone());
            buf.clear();
            buf.extend_from_slice(v);
            buf.extend_from_slice(u);
            sink(&buf, ab * &sign);
        }
    }
}

/// Streams the terms of `θ(x)` for the derivation `θ` of degree `degree`
/// given by `images[l]` on letter `l` (`None` for zero).
///
/// `θ(w_1…w_k) = Σ_i (−1)^{|θ|(|w_1|+…+|w_{i−1}|)} w_1…θ(w_i)…w_k`.
pub fn derivation_terms(
    x: &TensorPoly,
    degree: i64,
    images: &[Option<TensorPoly>],
    letter_degrees: &[i64],
    sink: &mut dyn FnMut(&[u8], Rational),
) {
    let mut buf: Vec<u8> = Vec::new();
    for (w, c) in x.terms() {
        let mut prefix = 0i64;
        for (i, &l) in w.iter().enumerate() {
            if let Some(Some(img)) = images.get(l as usize) {
                let coeff = c * &Rational::sign(degree * prefix);
                for (u, e) in img.terms() {
                    buf.clear();
                    buf.extend_from_slice(&w[..i]);
                    buf.extend_from_slice(u);
                    buf.extend_from_slice(&w[i + 1..]);
                    sink(&buf, &coeff * e);
                }
            }
            prefix += letter_degrees[l as usize];
        }
    }
}

pub fn apply_derivation(
    x: &TensorPoly,
    degree: i64,
    images: &[Option<TensorPoly>],
    letter_degrees: &[i64],
) -> TensorPoly {
    let mut acc = Accumulator::new();
    derivation_terms(x, degree, images, letter_degrees, &mut |w, c| acc.add(w, &c));
    acc.finish()
}

/// Algebra map determined by `images[l]` on letters.
pub fn apply_homomorphism(x: &TensorPoly, images: &[TensorPoly]) -> TensorPoly {
    let mut acc = Accumulator::new();
    for (w, c) in x.terms() {
        let mut prod = TensorPoly::monomial(Word::new(), c.clone());
        for &l in w {
            prod = prod.mul(&images[l as usize]);
            if prod.is_zero() {
                break;
            }
        }
        acc.add_poly(&prod, &Rational::one());
    }
    acc.finish()
}

/// `θ(x)` for a derivation along the algebra map `f` (images `f_images`):
/// `θ(w_1…w_k) = Σ_i ± f(w_1)…f(w_{i−1}) θ(w_i) f(w_{i+1})…f(w_k)`, with the
/// Koszul sign of `θ` passing `w_1…w_{i−1}`.
pub fn apply_f_derivation(
    x: &TensorPoly,
    degree: i64,
    theta: &[Option<TensorPoly>],
    f_images: &[TensorPoly],
    source_degrees: &[i64],
) -> TensorPoly {
    let mut acc = Accumulator::new();
    for (w, c) in x.terms() {
        let mut prefix_deg = 0i64;
        let mut prefix = TensorPoly::monomial(Word::new(), c.clone());
        for (i, &l) in w.iter().enumerate() {
            if let Some(Some(img)) = theta.get(l as usize) {
                let mut term = prefix.mul(img).scale(&Rational::sign(degree * prefix_deg));
                for &r in &w[i + 1..] {
                    if term.is_zero() {
                        break;
                    }
                    term = term.mul(&f_images[r as usize]);
                }
                acc.add_poly(&term, &Rational::one());
            }
            prefix = prefix.mul(&f_images[l as usize]);
            prefix_deg += source_degrees[l as usize];
        }
    }
    acc.finish()
}
