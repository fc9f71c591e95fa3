use std::fmt;

use exactlin::Rational;

use crate::error::LieError;
use crate::generators::GeneratorSet;
use crate::tensor::{word_degree, TensorPoly};

/// Homogeneous element of a free graded Lie algebra, stored in the tensor
/// algebra. The tensor normal form is canonical, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LieElement {
    degree: i64,
    poly: TensorPoly,
}

impl LieElement {
    /// The caller is responsible for `poly` being homogeneous of `degree`.
    pub fn from_poly(degree: i64, poly: TensorPoly) -> Self {
        LieElement { degree, poly }
    }

    pub fn zero(degree: i64) -> Self {
        LieElement {
            degree,
            poly: TensorPoly::zero(),
        }
    }

    pub fn generator(gens: &GeneratorSet, name: &str) -> Result<Self, LieError> {
        let i = gens
            .index_of(name)
            .ok_or_else(|| LieError::UnknownGenerator(name.to_string()))?;
        Ok(LieElement {
            degree: gens.get(i).degree,
            poly: TensorPoly::letter(i as u8),
        })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn poly(&self) -> &TensorPoly {
        &self.poly
    }

    pub fn into_poly(self) -> TensorPoly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LieElement {
            degree: self.degree,
            poly: self.poly.scale(c),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    fn same_degree(&self, other: &LieElement) -> Result<(), LieError> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(LieError::DegreeMismatch {
                what: "sum of homogeneous elements".into(),
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LieElement) -> Result<Self, LieError> {
        self.same_degree(other)?;
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Ok(LieElement {
            degree,
            poly: self.poly.add(&other.poly),
        })
    }

    pub fn sub(&self, other: &LieElement) -> Result<Self, LieError> {
        self.add(&other.neg())
    }

    /// `[x, y]` as a graded commutator, with no cutoff check.
    pub fn commutator(x: &LieElement, y: &LieElement) -> Self {
        LieElement {
            degree: x.degree + y.degree,
            poly: TensorPoly::commutator(&x.poly, x.degree, &y.poly, y.degree),
        }
    }

    /// Checks every word has the recorded degree.
    pub fn is_homogeneous(&self, letter_degrees: &[i64]) -> bool {
        self.poly.terms().iter().all(|(w, _)| {
            w.iter().all(|&l| (l as usize) < letter_degrees.len())
                && word_degree(w, letter_degrees) == self.degree
        })
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})_{}", self.poly, self.degree)
    }
}
