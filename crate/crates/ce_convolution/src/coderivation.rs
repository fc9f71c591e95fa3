use std::collections::BTreeMap;
use std::sync::Arc;

use derivations::DerivationComplex;
use exactlin::{Rational, SparseMatrix, SparseVec};
use gla_free::LawCheck;
use rayon::prelude::*;

use crate::coalgebra::{law, CECoalgebra, Tensor2, WordId};
use crate::error::CeError;
use crate::word::{normalize, Word};

/// The coderivation `Θ` of `C̄(L)` induced by a derivation `θ` of `L`:
/// `Θ(sx) = (−1)^{|θ|} s θ(x)`, extended over wedge products with Koszul
/// signs. The sign on letters is the one making `π∘Θ = (−1)^{|θ|} θ∘π`.
pub struct Coderivation {
    ce: Arc<CECoalgebra>,
    degree: i64,
    /// Source word degree ↦ matrix into word degree `m + degree`.
    matrices: BTreeMap<i64, SparseMatrix>,
    /// `θ` on letters: letter index ↦ coordinates of `θ(x)`.
    letters: Vec<SparseVec>,
}

impl Coderivation {
    pub fn new(
        ce: Arc<CECoalgebra>,
        der: &DerivationComplex,
        degree: i64,
        theta: &SparseVec,
    ) -> Result<Self, CeError> {
        let l = ce.base().clone();
        if der.target().generators() != l.generators() || der.source().generators() != l.generators() {
            return Err(CeError::Incompatible("θ must be a derivation of the coalgebra's base".into()));
        }
        let p = ce.cutoff();
        let mut letters = Vec::new();
        for n in 1..p {
            for b in 0..l.dim(n)? {
                let t = n + degree;
                let v = if t >= 1 && t < p {
                    let img = der.apply(degree, theta, &l.basis_element(n, b))?;
                    l.coordinates_unchecked(&img)?
                } else {
                    SparseVec::new()
                };
                letters.push(v);
            }
        }
        let mut cd = Coderivation {
            ce,
            degree,
            matrices: BTreeMap::new(),
            letters,
        };
        let (lo, hi) = cd.domain();
        cd.matrices = (lo..=hi)
            .into_par_iter()
            .map(|m| {
                let cols = (0..cd.ce.dim(m).unwrap_or(0))
                    .map(|i| cd.apply_word((m, i)))
                    .collect();
                (m, SparseMatrix::from_columns(cd.ce.dim(m + degree).unwrap_or(0), cols))
            })
            .collect();
        Ok(cd)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Word degrees on which `Θ` is computed.
    pub fn domain(&self) -> (i64, i64) {
        let p = self.ce.cutoff();
        ((-self.degree).max(0), (p - self.degree).min(p))
    }

    fn letter_id(&self, n: i64, b: usize) -> u32 {
        self.ce.letter_index(n, b) as u32
    }

    fn apply_word(&self, id: WordId) -> SparseVec {
        let ce = &self.ce;
        let w = ce.word(id).clone();
        let letters = ce.letters(id);
        let sign_k = Rational::sign(self.degree);
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        let mut prefix = 0i64;
        for (i, &(n, _)) in letters.iter().enumerate() {
            let e = w[i] as usize;
            let koszul = &Rational::sign(self.degree * prefix) * &sign_k;
            for (c_idx, c) in self.letters[e].iter() {
                let mut seq: Word = w.clone();
                seq[i] = self.letter_id(n + self.degree, c_idx);
                if let Some(s) = normalize(&mut seq, ce.letter_parities()) {
                    let target = ce.id_of(&seq).expect("word in range");
                    let mut coeff = c * &koszul;
                    if s < 0 {
                        coeff = -coeff;
                    }
                    *acc.entry(target.1).or_default() += coeff;
                }
            }
            prefix += n + 1;
        }
        SparseVec::from_map(acc)
    }

    /// `Θ` on coordinates of word degree `m`.
    pub fn apply(&self, m: i64, x: &SparseVec) -> Option<SparseVec> {
        self.matrices.get(&m).map(|a| a.apply(x))
    }

    pub fn matrix(&self, m: i64) -> Option<&SparseMatrix> {
        self.matrices.get(&m)
    }

    /// `π∘Θ = (−1)^{|θ|} θ∘π` on every word of the domain.
    pub fn check_projection(&self) -> LawCheck {
        let ce = &self.ce;
        let sign = Rational::sign(self.degree);
        let mut checked = 0;
        for (m, a) in &self.matrices {
            for i in 0..a.cols() {
                checked += 1;
                let lhs: SparseVec = SparseVec::from_entries(
                    a.column(i)
                        .iter()
                        .filter_map(|(j, c)| ce.desuspension((m + self.degree, j)).map(|(_, b)| (b, c.clone()))),
                );
                let rhs = match ce.desuspension((*m, i)) {
                    Some((n, b)) => self.letters[self.letter_id(n, b) as usize].scale(&sign),
                    None => SparseVec::new(),
                };
                if lhs != rhs {
                    return law("π∘Θ = ±θ∘π", checked, Some(ce.label((*m, i)).to_string()));
                }
            }
        }
        law("π∘Θ = ±θ∘π", checked, None)
    }

    /// `Δ̄Θ = (Θ⊗1 + 1⊗Θ)Δ̄` on words whose image stays in range.
    pub fn check_coderivation(&self) -> LawCheck {
        let ce = &self.ce;
        let k = self.degree;
        let mut checked = 0;
        for (m, a) in &self.matrices {
            for i in 0..a.cols() {
                checked += 1;
                let mut lhs: Tensor2 = BTreeMap::new();
                for (j, c) in a.column(i).iter() {
                    for (x, y, e) in ce.coproduct((m + k, j)) {
                        *lhs.entry((*x, *y)).or_default() += c * e;
                    }
                }
                let mut rhs: Tensor2 = BTreeMap::new();
                for (x, y, e) in ce.coproduct((*m, i)) {
                    if let Some(tx) = self.apply(x.0, &SparseVec::unit(x.1)) {
                        for (j, c) in tx.iter() {
                            *rhs.entry(((x.0 + k, j), *y)).or_default() += e * c;
                        }
                    }
                    if let Some(ty) = self.apply(y.0, &SparseVec::unit(y.1)) {
                        let s = Rational::sign(k * x.0);
                        for (j, c) in ty.iter() {
                            *rhs.entry((*x, (y.0 + k, j))).or_default() += &(e * c) * &s;
                        }
                    }
                }
                lhs.retain(|_, c| !c.is_zero());
                rhs.retain(|_, c| !c.is_zero());
                if lhs != rhs {
                    return law("Θ is a coderivation", checked, Some(ce.label((*m, i)).to_string()));
                }
            }
        }
        law("Θ is a coderivation", checked, None)
    }
}
