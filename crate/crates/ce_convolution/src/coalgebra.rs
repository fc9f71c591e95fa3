use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use exactlin::{ChainComplex, DegreeRange, GradedVectorSpace, Rational, SparseMatrix, SparseVec};
use gla_free::{FreeGradedLie, LawCheck, LieError};
use rayon::prelude::*;

use crate::error::CeError;
use crate::word::{normalize, unshuffles, Word};

/// `(degree, index)` of a basis word.
pub type WordId = (i64, usize);

/// Tensor of two coalgebra elements, as coefficients on pairs of words.
pub type Tensor2 = BTreeMap<(WordId, WordId), Rational>;

/// The Chevalley–Eilenberg coalgebra `Λ(sL)` of a connected free dg Lie
/// algebra, on words of total degree at most `cutoff`.
///
/// `d(sx) = −s dx`, `d(sx∧sy) = (−1)^{|x|} s[x,y]`, extended as a
/// coderivation; `Δ̄` sums over unshuffles with Koszul signs.
pub struct CECoalgebra {
    base: Arc<FreeGradedLie>,
    reduced: bool,
    cutoff: i64,
    /// Suspended basis elements as `(degree in L, basis index)`.
    letters: Vec<(i64, usize)>,
    letter_degrees: Vec<i64>,
    odd: Vec<bool>,
    offsets: BTreeMap<i64, usize>,
    words: Vec<Vec<Word>>,
    labels: Vec<Vec<String>>,
    index: HashMap<Word, WordId>,
    complex: ChainComplex,
    coproduct: Vec<Vec<Vec<(WordId, WordId, Rational)>>>,
}

impl std::fmt::Debug for CECoalgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CECoalgebra")
            .field("reduced", &self.reduced)
            .field("cutoff", &self.cutoff)
            .field("dims", &(0..=self.cutoff).map(|m| self.words[m as usize].len()).collect::<Vec<_>>())
            .finish()
    }
}

/// `C(L)` (or `C̄(L)` when `reduced`) on words of degree at most `cutoff`.
pub fn build_ce(l: Arc<FreeGradedLie>, cutoff: i64, reduced: bool) -> Result<CECoalgebra, CeError> {
    if let Some(g) = l.generators().iter().find(|g| g.degree < 1) {
        return Err(CeError::NotConnected(g.degree));
    }
    let cutoff = cutoff.max(0);
    if cutoff - 1 > l.cutoff() {
        return Err(LieError::range((1, cutoff - 1), l.valid_range()).into());
    }
    let mut letters = Vec::new();
    let mut offsets = BTreeMap::new();
    for n in 1..cutoff {
        offsets.insert(n, letters.len());
        letters.extend((0..l.dim(n)?).map(|i| (n, i)));
    }
    let letter_degrees: Vec<i64> = letters.iter().map(|(n, _)| n + 1).collect();
    let odd: Vec<bool> = letter_degrees.iter().map(|d| d % 2 != 0).collect();

    let mut by_degree: Vec<Vec<Word>> = vec![Vec::new(); cutoff as usize + 1];
    if !reduced {
        by_degree[0].push(Word::new());
    }
    let mut stack: Vec<(Word, i64, usize)> = vec![(Word::new(), 0, 0)];
    while let Some((w, deg, start)) = stack.pop() {
        for e in start..letters.len() {
            let nd = deg + letter_degrees[e];
            if nd > cutoff {
                break;
            }
            let mut nw = w.clone();
            nw.push(e as u32);
            by_degree[nd as usize].push(nw.clone());
            let next = if odd[e] { e + 1 } else { e };
            stack.push((nw, nd, next));
        }
    }

    let label_of = |w: &Word| -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|&e| {
                let (n, i) = letters[e as usize];
                format!("s{}", l.label(n, i))
            })
            .collect::<Vec<_>>()
            .join("∧")
    };
    let mut words = Vec::with_capacity(by_degree.len());
    let mut labels = Vec::with_capacity(by_degree.len());
    let mut index = HashMap::new();
    for (m, ws) in by_degree.into_iter().enumerate() {
        let mut pairs: Vec<(String, Word)> = ws.into_iter().map(|w| (label_of(&w), w)).collect();
        pairs.sort();
        for (i, (_, w)) in pairs.iter().enumerate() {
            index.insert(w.clone(), (m as i64, i));
        }
        let (ls, ws): (Vec<String>, Vec<Word>) = pairs.into_iter().unzip();
        labels.push(ls);
        words.push(ws);
    }

    let mut ce = CECoalgebra {
        base: l,
        reduced,
        cutoff,
        letters,
        letter_degrees,
        odd,
        offsets,
        words,
        labels,
        index,
        complex: ChainComplex::new(GradedVectorSpace::zero((0, 0)), BTreeMap::new())?,
        coproduct: Vec::new(),
    };
    ce.coproduct = (0..=cutoff)
        .map(|m| {
            ce.words[m as usize]
                .par_iter()
                .map(|w| ce.reduced_coproduct(w))
                .collect()
        })
        .collect();
    let space = GradedVectorSpace::new(
        (0, cutoff),
        (0..=cutoff).map(|m| (m, ce.labels[m as usize].clone())),
    )?;
    let d = (1..=cutoff)
        .into_par_iter()
        .map(|m| {
            let cols = ce.words[m as usize]
                .par_iter()
                .map(|w| ce.word_differential(w).map(|t| ce.to_coords(m - 1, &t)))
                .collect::<Result<Vec<_>, CeError>>()?;
            Ok((m, SparseMatrix::from_columns(ce.words[m as usize - 1].len(), cols)))
        })
        .collect::<Result<BTreeMap<_, _>, CeError>>()?;
    ce.complex = ChainComplex::new(space, d)?;
    Ok(ce)
}

impl CECoalgebra {
    pub fn base(&self) -> &Arc<FreeGradedLie> {
        &self.base
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn valid_range(&self) -> DegreeRange {
        (0, self.cutoff)
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    fn check(&self, m: i64) -> Result<(), CeError> {
        if m < 0 || m > self.cutoff {
            Err(LieError::range((m, m), self.valid_range()).into())
        } else {
            Ok(())
        }
    }

    pub fn dim(&self, m: i64) -> Result<usize, CeError> {
        self.check(m)?;
        Ok(self.words[m as usize].len())
    }

    pub fn word(&self, id: WordId) -> &Word {
        &self.words[id.0 as usize][id.1]
    }

    pub fn label(&self, id: WordId) -> &str {
        &self.labels[id.0 as usize][id.1]
    }

    pub fn labels(&self, m: i64) -> Result<&[String], CeError> {
        self.check(m)?;
        Ok(&self.labels[m as usize])
    }

    pub fn id_of(&self, w: &Word) -> Option<WordId> {
        self.index.get(w).copied()
    }

    /// Word length (number of wedge factors).
    pub fn length(&self, id: WordId) -> usize {
        self.word(id).len()
    }

    /// Degree in `L` and basis index of the letters of a word.
    pub fn letters(&self, id: WordId) -> Vec<(i64, usize)> {
        self.word(id).iter().map(|&e| self.letters[e as usize]).collect()
    }

    /// Whether each suspended letter has odd degree.
    pub fn letter_parities(&self) -> &[bool] {
        &self.odd
    }

    /// Position of `s b` (for `b` in `L_n`) among the letters.
    pub fn letter_index(&self, n: i64, b: usize) -> usize {
        self.offsets[&n] + b
    }

    /// The one-letter word `s b` for basis element `b` of `L_n`.
    pub fn suspension(&self, n: i64, b: usize) -> Result<WordId, CeError> {
        self.check(n + 1)?;
        let e = self.offsets[&n] + b;
        Ok(self.index[&Word::from_slice(&[e as u32])])
    }

    /// The letter (degree in `L`, index) of a length-one word.
    pub fn desuspension(&self, id: WordId) -> Option<(i64, usize)> {
        match self.word(id).as_slice() {
            [e] => Some(self.letters[*e as usize]),
            _ => None,
        }
    }

    pub fn counit(&self, id: WordId) -> Rational {
        if self.word(id).is_empty() {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    /// `Δ̄` of a basis word (both factors nonempty).
    pub fn coproduct(&self, id: WordId) -> &[(WordId, WordId, Rational)] {
        &self.coproduct[id.0 as usize][id.1]
    }

    /// Full coproduct `Δ`; equals `Δ̄` plus the unit terms in the
    /// unreduced coalgebra.
    pub fn full_coproduct(&self, id: WordId) -> Tensor2 {
        let mut t: Tensor2 = BTreeMap::new();
        for (a, b, c) in self.coproduct(id) {
            *t.entry((*a, *b)).or_default() += c.clone();
        }
        if !self.reduced {
            let unit = (0, 0);
            if id == unit {
                t.insert((unit, unit), Rational::one());
            } else {
                t.insert((unit, id), Rational::one());
                t.insert((id, unit), Rational::one());
            }
        }
        t
    }

    fn reduced_coproduct(&self, w: &Word) -> Vec<(WordId, WordId, Rational)> {
        let mut acc: BTreeMap<(WordId, WordId), i64> = BTreeMap::new();
        for (a, b, s) in unshuffles(w, &self.letter_degrees) {
            *acc.entry((self.index[&a], self.index[&b])).or_default() += s as i64;
        }
        acc.into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((a, b), c)| (a, b, Rational::from_integer(c)))
            .collect()
    }

    fn word_degree_prefix(&self, w: &[u32], skip: &[usize], upto: usize) -> i64 {
        (0..upto)
            .filter(|l| !skip.contains(l))
            .map(|l| self.letter_degrees[w[l] as usize])
            .sum()
    }

    fn add_normalized(&self, acc: &mut BTreeMap<Word, Rational>, mut seq: Word, c: Rational) {
        if let Some(s) = normalize(&mut seq, &self.odd) {
            let c = if s < 0 { -c } else { c };
            let e = acc.entry(seq).or_default();
            *e += c;
        }
    }

    /// `d_CE` of a normal-form word.
    fn word_differential(&self, w: &Word) -> Result<BTreeMap<Word, Rational>, CeError> {
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        let k = w.len();
        for i in 0..k {
            let (n, b) = self.letters[w[i] as usize];
            if n == 1 {
                continue;
            }
            let sign = Rational::sign(self.word_degree_prefix(w, &[], i));
            let dx = self.base.d_coords(n, &SparseVec::unit(b))?;
            for (e, c) in dx.iter() {
                let mut seq = w.clone();
                seq[i] = (self.offsets[&(n - 1)] + e) as u32;
                self.add_normalized(&mut acc, seq, -(c * &sign));
            }
        }
        for i in 0..k {
            for j in (i + 1)..k {
                let (ni, bi) = self.letters[w[i] as usize];
                let (nj, bj) = self.letters[w[j] as usize];
                let di = self.letter_degrees[w[i] as usize];
                let dj = self.letter_degrees[w[j] as usize];
                let eps = di * self.word_degree_prefix(w, &[], i)
                    + dj * self.word_degree_prefix(w, &[i], j);
                let sign = Rational::sign(eps + ni);
                let br = self.base.bracket_basis(ni, bi, nj, bj)?;
                for (e, c) in br.iter() {
                    let mut seq = Word::new();
                    seq.push((self.offsets[&(ni + nj)] + e) as u32);
                    seq.extend((0..k).filter(|&l| l != i && l != j).map(|l| w[l]));
                    self.add_normalized(&mut acc, seq, c * &sign);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(acc)
    }

    fn to_coords(&self, m: i64, t: &BTreeMap<Word, Rational>) -> SparseVec {
        SparseVec::from_entries(t.iter().map(|(w, c)| {
            let id = self.index[w];
            debug_assert_eq!(id.0, m);
            (id.1, c.clone())
        }))
    }

    /// `d_CE` on coordinates in degree `m`.
    pub fn d_coords(&self, m: i64, x: &SparseVec) -> Result<SparseVec, CeError> {
        self.check(m)?;
        if m == 0 {
            return Ok(SparseVec::new());
        }
        Ok(self.complex.d(m)?.apply(x))
    }

    /// `(d ⊗ 1 + 1 ⊗ d)` applied to a tensor.
    pub fn d_tensor(&self, t: &Tensor2) -> Tensor2 {
        let mut out: Tensor2 = BTreeMap::new();
        for ((a, b), c) in t {
            if a.0 > 0 {
                for (i, v) in self.complex.d(a.0).expect("valid").column(a.1).iter() {
                    *out.entry(((a.0 - 1, i), *b)).or_default() += c * v;
                }
            }
            if b.0 > 0 {
                let s = Rational::sign(a.0);
                for (i, v) in self.complex.d(b.0).expect("valid").column(b.1).iter() {
                    *out.entry((*a, (b.0 - 1, i))).or_default() += &(c * v) * &s;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn all_words(&self) -> impl Iterator<Item = WordId> + '_ {
        (0..=self.cutoff).flat_map(move |m| (0..self.words[m as usize].len()).map(move |i| (m, i)))
    }

    /// `(Δ̄ ⊗ 1)Δ̄ = (1 ⊗ Δ̄)Δ̄` on every word.
    pub fn check_coassociativity(&self) -> LawCheck {
        let ids: Vec<WordId> = self.all_words().collect();
        let witness = ids.par_iter().find_first(|&&id| {
            let mut left: BTreeMap<(WordId, WordId, WordId), Rational> = BTreeMap::new();
            let mut right = left.clone();
            for (a, b, c) in self.coproduct(id) {
                for (x, y, e) in self.coproduct(*a) {
                    *left.entry((*x, *y, *b)).or_default() += c * e;
                }
                for (x, y, e) in self.coproduct(*b) {
                    *right.entry((*a, *x, *y)).or_default() += c * e;
                }
            }
            left.retain(|_, c| !c.is_zero());
            right.retain(|_, c| !c.is_zero());
            left != right
        });
        law("coassociativity", ids.len(), witness.map(|id| self.label(*id).to_string()))
    }

    /// `Δ̄ = T∘Δ̄` with `T(a⊗b) = (−1)^{|a||b|} b⊗a`.
    pub fn check_cocommutativity(&self) -> LawCheck {
        let ids: Vec<WordId> = self.all_words().collect();
        let witness = ids.par_iter().find_first(|&&id| {
            let mut t: Tensor2 = BTreeMap::new();
            for (a, b, c) in self.coproduct(id) {
                *t.entry((*a, *b)).or_default() += c.clone();
                *t.entry((*b, *a)).or_default() -= c * &Rational::sign(a.0 * b.0);
            }
            t.values().any(|c| !c.is_zero())
        });
        law("cocommutativity", ids.len(), witness.map(|id| self.label(*id).to_string()))
    }

    /// `Δ̄ d = (d⊗1 + 1⊗d) Δ̄`.
    pub fn check_coderivation(&self) -> LawCheck {
        let ids: Vec<WordId> = self.all_words().filter(|id| id.0 > 0).collect();
        let witness = ids.par_iter().find_first(|&&id| {
            let mut lhs: Tensor2 = BTreeMap::new();
            for (i, v) in self.complex.d(id.0).expect("valid").column(id.1).iter() {
                for (a, b, c) in self.coproduct((id.0 - 1, i)) {
                    *lhs.entry((*a, *b)).or_default() += c * v;
                }
            }
            lhs.retain(|_, c| !c.is_zero());
            let mut t: Tensor2 = BTreeMap::new();
            for (a, b, c) in self.coproduct(id) {
                t.insert((*a, *b), c.clone());
            }
            lhs != self.d_tensor(&t)
        });
        law("d is a coderivation", ids.len(), witness.map(|id| self.label(*id).to_string()))
    }

    /// For each pair of words, the words whose coproduct contains it.
    pub(crate) fn cotable(&self) -> HashMap<(WordId, WordId), Vec<(WordId, Rational)>> {
        let mut table: HashMap<(WordId, WordId), Vec<(WordId, Rational)>> = HashMap::new();
        for id in self.all_words() {
            for (a, b, c) in self.coproduct(id) {
                table.entry((*a, *b)).or_default().push((id, c.clone()));
            }
        }
        table
    }
}

pub(crate) fn law(name: &str, checked: usize, witness: Option<String>) -> LawCheck {
    LawCheck {
        law: name.to_string(),
        holds: witness.is_none(),
        checked,
        witness,
    }
}
