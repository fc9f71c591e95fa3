//! Twisted semidirect products `g ⋉_ξ L`.

use std::fmt;

use exactlin::{DegreeRange, Rational, SparseVec};
use gla_free::{check_dg_lie_laws, DgLieAlgebra, LieError};

use crate::action::{bracket_or_zero, d_or_zero, OuterAction};
use crate::error::{lie_err, ActionError};

/// Exponent in the coefficient of the `y.a` term of the product bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum YaExponent {
    /// `|y||a|`
    DegYDegA,
    /// `|y|(|a| + 1)`
    DegYDegAPlusOne,
    /// `|a|`
    DegA,
    /// `0`
    Zero,
}

/// Sign choices in `[(x,a),(y,b)] = ([x,y], [a,b] + ε₁ x.b + ε₂ (−1)^e y.a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BracketVariant {
    pub xb_sign: i64,
    pub ya_sign: i64,
    pub ya_exponent: YaExponent,
}

impl BracketVariant {
    /// `[(x,a),(y,b)] = ([x,y], [a,b] + x.b − (−1)^{|y||a|} y.a)`.
    pub const LITERAL: BracketVariant = BracketVariant {
        xb_sign: 1,
        ya_sign: -1,
        ya_exponent: YaExponent::DegYDegA,
    };

    pub fn all() -> Vec<BracketVariant> {
        let mut out = Vec::new();
        for xb_sign in [1, -1] {
            for ya_sign in [1, -1] {
                for ya_exponent in [
                    YaExponent::DegYDegA,
                    YaExponent::DegYDegAPlusOne,
                    YaExponent::DegA,
                    YaExponent::Zero,
                ] {
                    out.push(BracketVariant {
                        xb_sign,
                        ya_sign,
                        ya_exponent,
                    });
                }
            }
        }
        out
    }

    fn ya_coefficient(&self, deg_y: i64, deg_a: i64) -> Rational {
        let e = match self.ya_exponent {
            YaExponent::DegYDegA => deg_y * deg_a,
            YaExponent::DegYDegAPlusOne => deg_y * (deg_a + 1),
            YaExponent::DegA => deg_a,
            YaExponent::Zero => 0,
        };
        Rational::from_integer(self.ya_sign) * Rational::sign(e)
    }
}

impl fmt::Display for BracketVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self.ya_exponent {
            YaExponent::DegYDegA => "|y||a|",
            YaExponent::DegYDegAPlusOne => "|y|(|a|+1)",
            YaExponent::DegA => "|a|",
            YaExponent::Zero => "0",
        };
        let s = |c: i64| if c > 0 { "+" } else { "−" };
        write!(f, "[a,b] {} x.b {} (−1)^{{{e}}} y.a", s(self.xb_sign), s(self.ya_sign))
    }
}

/// `g ⋉_ξ L` with `(g ⋉_ξ L)_n = g_n × L_n`, differential
/// `∂(x,a) = (dx, da + ξ(x))` and the bracket of the chosen variant.
///
/// Valid from the lower of the two bottoms to the lower of the two tops.
/// In coordinates, the `g` part comes first.
pub struct TwistedSemidirect<G, L> {
    action: OuterAction<G, L>,
    variant: BracketVariant,
    valid: DegreeRange,
}

impl<G: DgLieAlgebra + Send, L: DgLieAlgebra + Send> TwistedSemidirect<G, L> {
    pub fn new(action: OuterAction<G, L>) -> Self {
        Self::with_variant(action, BracketVariant::LITERAL)
    }

    pub fn with_variant(action: OuterAction<G, L>, variant: BracketVariant) -> Self {
        let (glo, ghi) = action.acting().valid_range();
        let (llo, lhi) = action.target().valid_range();
        TwistedSemidirect {
            action,
            variant,
            valid: (glo.min(llo), ghi.min(lhi)),
        }
    }

    pub fn action(&self) -> &OuterAction<G, L> {
        &self.action
    }

    pub fn variant(&self) -> BracketVariant {
        self.variant
    }

    fn part_dim<A: DgLieAlgebra + ?Sized>(a: &A, n: i64) -> Result<usize, ActionError> {
        let (lo, hi) = a.valid_range();
        if n < lo {
            Ok(0)
        } else if n > hi {
            Err(LieError::range((n, n), (lo, hi)).into())
        } else {
            Ok(a.dim(n)?)
        }
    }

    pub fn acting_dim(&self, n: i64) -> Result<usize, ActionError> {
        Self::part_dim(self.action.acting().as_ref(), n)
    }

    pub fn target_dim(&self, n: i64) -> Result<usize, ActionError> {
        Self::part_dim(self.action.target().as_ref(), n)
    }

    fn check(&self, n: i64) -> Result<(), ActionError> {
        if n < self.valid.0 || n > self.valid.1 {
            return Err(LieError::range((n, n), self.valid).into());
        }
        Ok(())
    }

    /// Splits coordinates of degree `n` into the `g` and `L` parts.
    pub fn split(&self, n: i64, v: &SparseVec) -> Result<(SparseVec, SparseVec), ActionError> {
        self.check(n)?;
        let k = self.acting_dim(n)?;
        let x = v.reindex(|i| (i < k).then_some(i));
        let a = v.reindex(|i| (i >= k).then(|| i - k));
        Ok((x, a))
    }

    pub fn join(&self, n: i64, x: &SparseVec, a: &SparseVec) -> Result<SparseVec, ActionError> {
        self.check(n)?;
        let k = self.acting_dim(n)?;
        Ok(x.add(&a.reindex(|i| Some(i + k))))
    }

    pub fn differential(&self, n: i64, v: &SparseVec) -> Result<SparseVec, ActionError> {
        self.check(n)?;
        if n <= self.valid.0 || v.is_zero() {
            return Ok(SparseVec::new());
        }
        let g = self.action.acting().as_ref();
        let l = self.action.target().as_ref();
        let (x, a) = self.split(n, v)?;
        let dx = d_or_zero(g, n, &x)?;
        let da = d_or_zero(l, n, &a)?.add(&self.action.xi(n, &x)?);
        self.join(n - 1, &dx, &da)
    }

    pub fn bracket(&self, p: i64, u: &SparseVec, q: i64, v: &SparseVec) -> Result<SparseVec, ActionError> {
        self.check(p + q)?;
        let g = self.action.acting().as_ref();
        let l = self.action.target().as_ref();
        let (x, a) = self.split(p, u)?;
        let (y, b) = self.split(q, v)?;
        let xy = if p + q < g.valid_range().0 {
            SparseVec::new()
        } else {
            bracket_or_zero(g, p, &x, q, &y)?
        };
        let ab = bracket_or_zero(l, p, &a, q, &b)?;
        let xb = self.action.act(p, &x, q, &b)?;
        let ya = self.action.act(q, &y, p, &a)?;
        let second = ab
            .add_scaled(&xb, &Rational::from_integer(self.variant.xb_sign))
            .add_scaled(&ya, &self.variant.ya_coefficient(q, p));
        self.join(p + q, &xy, &second)
    }
}

impl<G: DgLieAlgebra + Send, L: DgLieAlgebra + Send> DgLieAlgebra for TwistedSemidirect<G, L> {
    fn valid_range(&self) -> DegreeRange {
        self.valid
    }

    fn dim(&self, n: i64) -> Result<usize, LieError> {
        self.check(n).map_err(lie_err)?;
        Ok(self.acting_dim(n).map_err(lie_err)? + self.target_dim(n).map_err(lie_err)?)
    }

    fn basis_label(&self, n: i64, i: usize) -> String {
        let k = self.acting_dim(n).unwrap_or(0);
        if i < k {
            format!("({}, 0)", self.action.acting().basis_label(n, i))
        } else {
            format!("(0, {})", self.action.target().basis_label(n, i - k))
        }
    }

    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        TwistedSemidirect::differential(self, n, x).map_err(lie_err)
    }

    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        TwistedSemidirect::bracket(self, p, x, q, y).map_err(lie_err)
    }
}

/// Which bracket variants make `g ⋉_ξ L` a dg Lie algebra up to `up_to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantPin {
    pub passing: Vec<BracketVariant>,
    pub literal_passes: bool,
}

impl VariantPin {
    /// The unique passing variant, if there is exactly one.
    pub fn unique(&self) -> Option<BracketVariant> {
        (self.passing.len() == 1).then(|| self.passing[0])
    }
}

/// Tries every variant of [`BracketVariant::all`] against `d² = 0`, graded
/// antisymmetry, Jacobi and Leibniz.
pub fn pin_bracket_variant<G, L>(action: &OuterAction<G, L>, up_to: i64) -> Result<VariantPin, ActionError>
where
    G: DgLieAlgebra + Send,
    L: DgLieAlgebra + Send,
{
    let mut passing = Vec::new();
    for v in BracketVariant::all() {
        let product = TwistedSemidirect::with_variant(action.clone(), v);
        if check_dg_lie_laws(&product, up_to)?.iter().all(|c| c.holds) {
            passing.push(v);
        }
    }
    let literal_passes = passing.contains(&BracketVariant::LITERAL);
    Ok(VariantPin {
        passing,
        literal_passes,
    })
}

impl<G, L> Clone for TwistedSemidirect<G, L> {
    fn clone(&self) -> Self {
        TwistedSemidirect {
            action: self.action.clone(),
            variant: self.variant,
            valid: self.valid,
        }
    }
}
