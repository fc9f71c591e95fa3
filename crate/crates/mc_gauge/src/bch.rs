//! Exponential group elements and their product by the
//! Campbell–Baker–Hausdorff series in Dynkin's form.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use exactlin::{Rational, SparseVec};
use gla_free::{DgLieAlgebra, LieError};

use crate::error::GaugeError;

/// Largest nilpotency class accepted by [`bch`].
pub const MAX_CLASS: usize = 6;

/// A degree-0 cycle whose adjoint action is nilpotent on the whole valid
/// range of its algebra: `ad_x^k = 0` for the recorded `k`.
pub struct GroupElement<A> {
    ambient: Arc<A>,
    coords: SparseVec,
    nilpotency: usize,
    bound: usize,
}

impl<A> Clone for GroupElement<A> {
    fn clone(&self) -> Self {
        GroupElement {
            ambient: self.ambient.clone(),
            coords: self.coords.clone(),
            nilpotency: self.nilpotency,
            bound: self.bound,
        }
    }
}

impl<A> std::fmt::Debug for GroupElement<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupElement")
            .field("coords", &self.coords)
            .field("nilpotency", &self.nilpotency)
            .finish()
    }
}

fn in_range<A: DgLieAlgebra + ?Sized>(a: &A, n: i64) -> bool {
    let (lo, hi) = a.valid_range();
    lo <= n && n <= hi
}

/// Smallest `k ≤ bound` with `ad_x^k = 0` on every valid degree.
pub fn ad_nilpotency<A: DgLieAlgebra + ?Sized>(l: &A, x: &SparseVec, bound: usize) -> Result<usize, GaugeError> {
    let (lo, hi) = l.valid_range();
    let mut index = 0;
    if x.is_zero() {
        return Ok(0);
    }
    for n in lo..=hi {
        for i in 0..l.dim(n)? {
            let mut v = SparseVec::unit(i);
            let mut k = 0;
            while !v.is_zero() {
                if k == bound {
                    return Err(GaugeError::NilpotencyBoundExceeded {
                        bound,
                        detail: format!("ad_x^{bound} is nonzero on {} (degree {n})", l.basis_label(n, i)),
                    });
                }
                v = l.bracket(0, x, n, &v)?;
                k += 1;
            }
            index = index.max(k);
        }
    }
    Ok(index)
}

impl<A: DgLieAlgebra> GroupElement<A> {
    /// Checks `dx = 0` and that `ad_x` is nilpotent of index at most
    /// `bound`.
    pub fn new(ambient: Arc<A>, coords: SparseVec, bound: usize) -> Result<Self, GaugeError> {
        if !in_range(ambient.as_ref(), 0) {
            return Err(LieError::range((0, 0), ambient.valid_range()).into());
        }
        if ambient.valid_range().0 < 0 && !ambient.differential(0, &coords)?.is_zero() {
            return Err(GaugeError::NotACycle("dx ≠ 0".into()));
        }
        let nilpotency = ad_nilpotency(ambient.as_ref(), &coords, bound)?;
        Ok(GroupElement {
            ambient,
            coords,
            nilpotency,
            bound,
        })
    }

    pub fn identity(ambient: Arc<A>) -> Result<Self, GaugeError> {
        Self::new(ambient, SparseVec::new(), 0)
    }

    pub fn ambient(&self) -> &Arc<A> {
        &self.ambient
    }

    pub fn coords(&self) -> &SparseVec {
        &self.coords
    }

    pub fn nilpotency(&self) -> usize {
        self.nilpotency
    }

    /// `exp(−x)`.
    pub fn inverse(&self) -> Self {
        GroupElement {
            coords: self.coords.neg(),
            ..self.clone()
        }
    }
}

impl<A> PartialEq for GroupElement<A> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) && self.coords == other.coords
    }
}

/// A word in `x` (`false`) and `y` (`true`).
type Word = Vec<bool>;

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::from_integer(1), |acc, k| acc * Rational::from_integer(k))
}

/// Dynkin's coefficients of the right-normed brackets `[w_1,[w_2,…,w_m]]`
/// in `log(e^x e^y)`, for words of length at most `class`:
/// `Σ_n (−1)^{n−1}/n · 1/(m Π r_i! s_i!)` over `x^{r_1}y^{s_1}⋯x^{r_n}y^{s_n} = w`.
pub fn dynkin_coefficients(class: usize) -> BTreeMap<Word, Rational> {
    fn walk(blocks: &mut Vec<(usize, usize)>, len: usize, class: usize, out: &mut BTreeMap<Word, Rational>) {
        if !blocks.is_empty() {
            let n = blocks.len() as i64;
            let mut denom = Rational::from_integer(len as i64);
            let mut word = Vec::with_capacity(len);
            for &(r, s) in blocks.iter() {
                denom = denom * factorial(r) * factorial(s);
                word.extend(std::iter::repeat(false).take(r));
                word.extend(std::iter::repeat(true).take(s));
            }
            let c = Rational::sign(n - 1) / (Rational::from_integer(n) * denom);
            *out.entry(word).or_insert_with(Rational::zero) += c;
        }
        for r in 0..=class - len {
            for s in 0..=class - len - r {
                if r + s == 0 {
                    continue;
                }
                blocks.push((r, s));
                walk(blocks, len + r + s, class, out);
                blocks.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(&mut Vec::new(), 0, class, &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

/// Right-normed brackets of words in two degree-0 elements, memoised on
/// suffixes.
struct Brackets<'a, A: ?Sized> {
    l: &'a A,
    x: &'a SparseVec,
    y: &'a SparseVec,
    memo: HashMap<Word, SparseVec>,
}

impl<A: DgLieAlgebra + ?Sized> Brackets<'_, A> {
    fn of(&mut self, w: &[bool]) -> Result<SparseVec, GaugeError> {
        if let Some(v) = self.memo.get(w) {
            return Ok(v.clone());
        }
        let (x, y) = (self.x, self.y);
        let letter = |b: bool| if b { y } else { x };
        let v = if w.len() == 1 {
            letter(w[0]).clone()
        } else {
            let rest = self.of(&w[1..])?;
            if rest.is_zero() {
                rest
            } else {
                self.l.bracket(0, letter(w[0]), 0, &rest)?
            }
        };
        self.memo.insert(w.to_vec(), v.clone());
        Ok(v)
    }
}

/// `log(e^x e^y)` for degree-0 `x, y` generating a Lie algebra of class at
/// most `class_bound`, which is verified: every right-normed bracket of
/// length `class_bound + 1` must vanish.
pub fn bch_series<A: DgLieAlgebra + ?Sized>(
    l: &A,
    x: &SparseVec,
    y: &SparseVec,
    class_bound: usize,
) -> Result<SparseVec, GaugeError> {
    if class_bound > MAX_CLASS {
        return Err(GaugeError::ClassBoundTooLarge {
            bound: class_bound,
            max: MAX_CLASS,
        });
    }
    if !in_range(l, 0) {
        return Err(LieError::range((0, 0), l.valid_range()).into());
    }
    let mut br = Brackets {
        l,
        x,
        y,
        memo: HashMap::new(),
    };
    let len = class_bound + 1;
    for bits in 0..1u32 << len {
        let w: Word = (0..len).map(|i| bits >> i & 1 == 1).collect();
        if !br.of(&w)?.is_zero() {
            return Err(GaugeError::NilpotencyBoundExceeded {
                bound: class_bound,
                detail: format!("a bracket of length {len} in x, y is nonzero"),
            });
        }
    }
    let mut out = SparseVec::new();
    for (w, c) in dynkin_coefficients(class_bound) {
        out = out.add_scaled(&br.of(&w)?, &c);
    }
    Ok(out)
}

/// `exp(x)·exp(y) = exp(bch(x, y))`.
pub fn bch<A: DgLieAlgebra>(
    x: &GroupElement<A>,
    y: &GroupElement<A>,
    class_bound: usize,
) -> Result<GroupElement<A>, GaugeError> {
    if !Arc::ptr_eq(&x.ambient, &y.ambient) {
        return Err(GaugeError::DifferentAmbient);
    }
    let z = bch_series(x.ambient.as_ref(), &x.coords, &y.coords, class_bound)?;
    GroupElement::new(x.ambient.clone(), z, x.bound.max(y.bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_dynkin_coefficients() {
        let c = dynkin_coefficients(2);
        assert_eq!(c[&vec![false]], Rational::one());
        assert_eq!(c[&vec![true]], Rational::one());
        // ½[x,y] from n = 1 and ∓¼ from the two n = 2 splittings
        assert_eq!(c.get(&vec![false, true]), Some(&Rational::new(1, 4)));
        assert_eq!(c.get(&vec![true, false]), Some(&Rational::new(-1, 4)));
        assert!(!c.contains_key(&vec![false, false]) || c[&vec![false, false]].is_zero());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), Rational::one());
        assert_eq!(factorial(5), Rational::from_integer(120));
    }
}
