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

use exactlin::SparseVec;
use gla_free::{DgLieAlgebra, LieError};

/// Strictly upper triangular `n × n` matrices in degree 0, basis `E_ij`,
/// `i < j`, ordered row by row.
pub struct UpperTriangular {
    pub n: usize,
}

pub type Matrix = Vec<Vec<Rational>>;

impl UpperTriangular {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push((i, j));
            }
        }
        out
    }

    pub fn to_matrix(&self, v: &SparseVec) -> Matrix {
        let mut m = vec![vec![Rational::zero(); self.n]; self.n];
        let pairs = self.pairs();
        for (k, c) in v.iter() {
            let (i, j) = pairs[k];
            m[i][j] = c.clone();
        }
        m
    }

    pub fn from_matrix(&self, m: &Matrix) -> SparseVec {
        SparseVec::from_entries(
            self.pairs()
                .into_iter()
                .enumerate()
                .map(|(k, (i, j))| (k, m[i][j].clone())),
        )
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

pub fn mat_add(a: &Matrix, b: &Matrix, c: &Rational) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + &(y * c)).collect())
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn mat_exp(x: &Matrix) -> Matrix {
    let n = x.len();
    let mut out = identity(n);
    let mut power = identity(n);
    for k in 1..=n {
        power = mat_mul(&power, x);
        out = mat_add(&out, &power, &Rational::inverse_factorial(k as u32));
    }
    out
}

/// `log(1 + N)` for nilpotent `N`.
pub fn mat_log_unipotent(u: &Matrix) -> Matrix {
    let n = u.len();
    let nil = mat_add(u, &identity(n), &Rational::from_integer(-1));
    let mut out = vec![vec![Rational::zero(); n]; n];
    let mut power = identity(n);
    for k in 1..=n {
        power = mat_mul(&power, &nil);
        out = mat_add(&out, &power, &(Rational::sign(k as i64 + 1) / Rational::from_integer(k as i64)));
    }
    out
}

impl DgLieAlgebra for UpperTriangular {
    fn valid_range(&self) -> (i64, i64) {
        (0, 0)
    }

    fn dim(&self, n: i64) -> Result<usize, LieError> {
        if n != 0 {
            return Err(LieError::range((n, n), (0, 0)));
        }
        Ok(self.n * (self.n - 1) / 2)
    }

    fn basis_label(&self, _: i64, i: usize) -> String {
        let (a, b) = self.pairs()[i];
        format!("E{a}{b}")
    }

    fn differential(&self, _: i64, _: &SparseVec) -> Result<SparseVec, LieError> {
        Ok(SparseVec::new())
    }

    fn bracket(&self, _: i64, x: &SparseVec, _: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        let (a, b) = (self.to_matrix(x), self.to_matrix(y));
        let m = mat_add(&mat_mul(&a, &b), &mat_mul(&b, &a), &Rational::from_integer(-1));
        Ok(self.from_matrix(&m))
    }
}
