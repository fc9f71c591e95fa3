use std::sync::Arc;

use exactlin::{Rational, SparseVec};
use rayon::prelude::*;

use crate::coalgebra::{CECoalgebra, WordId};
use crate::error::CeError;

/// The universal twisting morphism `π: C̄(L) → L` of degree −1,
/// `π(sx) = x` and zero on longer words.
pub struct TwistingMorphism {
    coalgebra: Arc<CECoalgebra>,
}

impl TwistingMorphism {
    pub fn coalgebra(&self) -> &Arc<CECoalgebra> {
        &self.coalgebra
    }

    /// `π(w)` as coordinates in `L_{|w|−1}`.
    pub fn evaluate(&self, id: WordId) -> SparseVec {
        match self.coalgebra.desuspension(id) {
            Some((_, b)) => SparseVec::unit(b),
            None => SparseVec::new(),
        }
    }

    /// `π∘d + d∘π + ½[π,π]` on a word, in `L_{|w|−2}`.
    pub fn mc_defect(&self, id: WordId) -> Result<SparseVec, CeError> {
        let ce = &self.coalgebra;
        let l = ce.base();
        let m = id.0;
        if m < 2 {
            return Ok(SparseVec::new());
        }
        let mut acc = SparseVec::new();
        for (i, c) in ce.complex().d(m)?.column(id.1).iter() {
            acc = acc.add_scaled(&self.evaluate((m - 1, i)), c);
        }
        if let Some((n, b)) = ce.desuspension(id) {
            acc = acc.add(&l.d_coords(n, &SparseVec::unit(b))?);
        }
        let half = Rational::new(1, 2);
        for (a, b, c) in ce.coproduct(id) {
            let (pa, pb) = (self.evaluate(*a), self.evaluate(*b));
            if pa.is_zero() || pb.is_zero() {
                continue;
            }
            let br = l.bracket_coords(a.0 - 1, &pa, b.0 - 1, &pb)?;
            let coeff = &(c * &Rational::sign(a.0)) * &half;
            acc = acc.add_scaled(&br, &coeff);
        }
        Ok(acc)
    }

    /// Checks the Maurer–Cartan equation `π∘d = −d∘π − ½[π,π]` on every word.
    pub fn verify(&self) -> Result<(), CeError> {
        let ce = &self.coalgebra;
        let ids: Vec<WordId> = (2..=ce.cutoff())
            .flat_map(|m| (0..ce.dim(m).unwrap_or(0)).map(move |i| (m, i)))
            .collect();
        let bad = ids
            .par_iter()
            .map(|&id| self.mc_defect(id).map(|v| (id, v)))
            .find_first(|r| !matches!(r, Ok((_, v)) if v.is_zero()));
        match bad {
            None => Ok(()),
            Some(Err(e)) => Err(e),
            Some(Ok((id, v))) => Err(CeError::MCViolation {
                word: ce.label(id).to_string(),
                detail: format!("defect {}", ce.base().format_coords(id.0 - 2, &v)),
            }),
        }
    }
}

/// `π` for the coalgebra, with its Maurer–Cartan equation verified.
pub fn universal_twisting(ce: Arc<CECoalgebra>) -> Result<TwistingMorphism, CeError> {
    let pi = TwistingMorphism { coalgebra: ce };
    pi.verify()?;
    Ok(pi)
}
