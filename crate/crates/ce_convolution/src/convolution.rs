use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use derivations::{DerivationComplex, DerivationKind};
use exactlin::{
    kernel, ChainComplex, DegreeRange, GradedVectorSpace, Rational, SparseMatrix, SparseVec,
};
use gla_free::{DgLieAlgebra, FreeGradedLie, LawCheck, LieError, LieMorphism};
use rayon::prelude::*;

use crate::coalgebra::{build_ce, law, CECoalgebra, WordId};
use crate::error::CeError;

/// Per-word values of a convolution element, in target coordinates.
pub type WordValues = BTreeMap<WordId, SparseVec>;

struct Tables {
    ce: Arc<CECoalgebra>,
    target: Arc<FreeGradedLie>,
    /// For a word `w'`, the words `w` one degree up with `d_C w ∋ c w'`.
    d_rows: HashMap<WordId, Vec<(WordId, Rational)>>,
    cotable: HashMap<(WordId, WordId), Vec<(WordId, Rational)>>,
}

struct Cells {
    cells: Vec<(WordId, usize)>,
    labels: Vec<String>,
    index: HashMap<(WordId, usize), usize>,
}

/// `Hom(C̄_{≤P}(L_A), L_X)`: linear maps on the words of degree at most `P`,
/// with `∂f = d∘f − (−1)^{|f|} f∘d`, `[f,g] = ℓ∘(f⊗g)∘Δ̄`, and optionally a
/// twist `∂^τ = ∂ + [τ, −]`.
///
/// The maps vanishing on `C̄_{≤P}` form a subcomplex of the full convolution
/// algebra, so this is a quotient complex; it computes the full homology in
/// degree `n` whenever `H_q(L_X) = 0` for all `q ≥ n + P`.
#[derive(Clone)]
pub struct ConvolutionDgLie {
    tables: Arc<Tables>,
    degrees: Arc<BTreeMap<i64, Cells>>,
    valid: DegreeRange,
    twist: Option<SparseVec>,
    complex: ChainComplex,
}

impl std::fmt::Debug for ConvolutionDgLie {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConvolutionDgLie")
            .field("word_cutoff", &self.word_cutoff())
            .field("valid", &self.valid)
            .field("twisted", &self.twist.is_some())
            .finish()
    }
}

/// Convolution algebra of `C̄(a)` truncated at word degree `word_cutoff` into
/// `x`, up to degree `max_degree` (default: as far as `x`'s cutoff allows).
pub fn build_convolution(
    a: Arc<FreeGradedLie>,
    x: Arc<FreeGradedLie>,
    word_cutoff: i64,
    max_degree: Option<i64>,
) -> Result<ConvolutionDgLie, CeError> {
    let ce = Arc::new(build_ce(a, word_cutoff, true)?);
    ConvolutionDgLie::new(ce, x, max_degree)
}

impl ConvolutionDgLie {
    pub fn new(ce: Arc<CECoalgebra>, x: Arc<FreeGradedLie>, max_degree: Option<i64>) -> Result<Self, CeError> {
        if !ce.is_reduced() {
            return Err(CeError::Incompatible("convolution needs the reduced coalgebra".into()));
        }
        let p = ce.cutoff();
        let hi = max_degree.unwrap_or(x.cutoff() - p);
        let lo = -p;
        if hi < lo || hi + p > x.cutoff() {
            return Err(LieError::range((lo, hi + p), x.valid_range()).into());
        }
        let mut d_rows: HashMap<WordId, Vec<(WordId, Rational)>> = HashMap::new();
        for m in 1..=p {
            for (j, col) in ce.complex().d(m)?.columns().iter().enumerate() {
                for (i, c) in col.iter() {
                    d_rows.entry((m - 1, i)).or_default().push(((m, j), c.clone()));
                }
            }
        }
        let cotable = ce.cotable();
        let mut degrees = BTreeMap::new();
        for n in lo..=hi {
            let mut cells = Vec::new();
            let mut labels = Vec::new();
            for m in 0..=p {
                let t = m + n;
                if t < 1 {
                    continue;
                }
                for w in 0..ce.dim(m)? {
                    for b in 0..x.dim(t)? {
                        cells.push(((m, w), b));
                        labels.push(format!("{}->{}", ce.label((m, w)), x.label(t, b)));
                    }
                }
            }
            let mut order: Vec<usize> = (0..cells.len()).collect();
            order.sort_by(|&i, &j| labels[i].cmp(&labels[j]));
            let cells: Vec<(WordId, usize)> = order.iter().map(|&i| cells[i]).collect();
            let labels: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();
            let index = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
            degrees.insert(n, Cells { cells, labels, index });
        }
        let mut conv = ConvolutionDgLie {
            tables: Arc::new(Tables {
                ce,
                target: x,
                d_rows,
                cotable,
            }),
            degrees: Arc::new(degrees),
            valid: (lo, hi),
            twist: None,
            complex: ChainComplex::new(GradedVectorSpace::zero((0, 0)), BTreeMap::new())?,
        };
        conv.complex = conv.build_complex()?;
        Ok(conv)
    }

    fn build_complex(&self) -> Result<ChainComplex, CeError> {
        let (lo, hi) = self.valid;
        let space = GradedVectorSpace::new(
            (lo, hi),
            (lo..=hi).map(|n| (n, self.degrees[&n].labels.clone())),
        )?;
        let d = ((lo + 1)..=hi)
            .into_par_iter()
            .map(|n| {
                let cols = (0..self.dim(n)?)
                    .into_par_iter()
                    .map(|j| self.differential(n, &SparseVec::unit(j)))
                    .collect::<Result<Vec<_>, CeError>>()?;
                Ok((n, SparseMatrix::from_columns(self.dim(n - 1)?, cols)))
            })
            .collect::<Result<BTreeMap<_, _>, CeError>>()?;
        Ok(ChainComplex::new(space, d)?)
    }

    pub fn coalgebra(&self) -> &Arc<CECoalgebra> {
        &self.tables.ce
    }

    pub fn source(&self) -> &Arc<FreeGradedLie> {
        self.tables.ce.base()
    }

    pub fn target(&self) -> &Arc<FreeGradedLie> {
        &self.tables.target
    }

    pub fn word_cutoff(&self) -> i64 {
        self.tables.ce.cutoff()
    }

    pub fn valid_range(&self) -> DegreeRange {
        self.valid
    }

    pub fn twisting_element(&self) -> Option<&SparseVec> {
        self.twist.as_ref()
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    fn cells(&self, n: i64) -> Result<&Cells, CeError> {
        self.degrees
            .get(&n)
            .ok_or_else(|| LieError::range((n, n), self.valid).into())
    }

    pub fn dim(&self, n: i64) -> Result<usize, CeError> {
        Ok(self.cells(n)?.cells.len())
    }

    pub fn labels(&self, n: i64) -> Result<&[String], CeError> {
        Ok(&self.cells(n)?.labels)
    }

    pub fn label(&self, n: i64, i: usize) -> &str {
        &self.degrees[&n].labels[i]
    }

    pub fn values(&self, n: i64, f: &SparseVec) -> Result<WordValues, CeError> {
        let cells = &self.cells(n)?.cells;
        let mut parts: BTreeMap<WordId, Vec<(usize, Rational)>> = BTreeMap::new();
        for (i, c) in f.iter() {
            let (w, b) = cells[i];
            parts.entry(w).or_default().push((b, c.clone()));
        }
        Ok(parts
            .into_iter()
            .map(|(w, e)| (w, SparseVec::from_entries(e)))
            .collect())
    }

    /// Coordinates of the map with the given per-word values; words of
    /// degree above the truncation are ignored.
    pub fn from_values(&self, n: i64, values: &WordValues) -> Result<SparseVec, CeError> {
        let index = &self.cells(n)?.index;
        Ok(SparseVec::from_entries(values.iter().flat_map(|(w, v)| {
            v.iter()
                .filter_map(move |(b, c)| index.get(&(*w, b)).map(|&i| (i, c.clone())))
        })))
    }

    /// Untwisted `∂` on per-word values of degree `n`.
    fn partial_values(&self, n: i64, f: &WordValues) -> Result<WordValues, CeError> {
        let x = &self.tables.target;
        let mut out: BTreeMap<WordId, SparseVec> = BTreeMap::new();
        let sign = -Rational::sign(n);
        for (w, v) in f {
            let t = w.0 + n;
            let dv = x.d_coords(t, v)?;
            if !dv.is_zero() {
                let e = out.entry(*w).or_default();
                *e = e.add(&dv);
            }
            if let Some(rows) = self.tables.d_rows.get(w) {
                for (up, c) in rows {
                    let e = out.entry(*up).or_default();
                    *e = e.add_scaled(v, &(c * &sign));
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    fn bracket_values(&self, p: i64, f: &WordValues, q: i64, g: &WordValues) -> Result<WordValues, CeError> {
        let x = &self.tables.target;
        let mut out: BTreeMap<WordId, SparseVec> = BTreeMap::new();
        for (a, fa) in f {
            for (b, gb) in g {
                let Some(targets) = self.tables.cotable.get(&(*a, *b)) else {
                    continue;
                };
                let br = x.bracket_coords(a.0 + p, fa, b.0 + q, gb)?;
                if br.is_zero() {
                    continue;
                }
                let s = Rational::sign(q * a.0);
                for (w, c) in targets {
                    let e = out.entry(*w).or_default();
                    *e = e.add_scaled(&br, &(c * &s));
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    fn check_degree(&self, n: i64) -> Result<(), CeError> {
        self.cells(n).map(|_| ())
    }

    /// `∂` (or `∂^τ` when twisted) on coordinates of degree `n`.
    pub fn differential(&self, n: i64, f: &SparseVec) -> Result<SparseVec, CeError> {
        self.check_degree(n)?;
        if n <= self.valid.0 || f.is_zero() {
            return Ok(SparseVec::new());
        }
        let fv = self.values(n, f)?;
        let mut out = self.partial_values(n, &fv)?;
        if let Some(tau) = &self.twist {
            let tv = self.values(-1, tau)?;
            for (w, v) in self.bracket_values(-1, &tv, n, &fv)? {
                let e = out.entry(w).or_default();
                *e = e.add(&v);
            }
        }
        self.from_values(n - 1, &out)
    }

    /// Untwisted `∂` regardless of any twist.
    pub fn untwisted_differential(&self, n: i64, f: &SparseVec) -> Result<SparseVec, CeError> {
        self.check_degree(n)?;
        self.check_degree(n - 1)?;
        let fv = self.values(n, f)?;
        self.from_values(n - 1, &self.partial_values(n, &fv)?)
    }

    pub fn bracket(&self, p: i64, f: &SparseVec, q: i64, g: &SparseVec) -> Result<SparseVec, CeError> {
        self.check_degree(p)?;
        self.check_degree(q)?;
        self.check_degree(p + q)?;
        let out = self.bracket_values(p, &self.values(p, f)?, q, &self.values(q, g)?)?;
        self.from_values(p + q, &out)
    }

    /// `∂τ + ½[τ,τ]` for a degree −1 element (untwisted `∂`).
    pub fn mc_curvature(&self, tau: &SparseVec) -> Result<SparseVec, CeError> {
        if self.valid.0 > -2 {
            // words stop below degree 2, so Hom_{−2} = 0
            self.check_degree(-1)?;
            return Ok(SparseVec::new());
        }
        let d = self.untwisted_differential(-1, tau)?;
        let b = self.bracket(-1, tau, -1, tau)?;
        Ok(d.add_scaled(&b, &Rational::new(1, 2)))
    }

    pub fn is_mc(&self, tau: &SparseVec) -> Result<bool, CeError> {
        Ok(self.mc_curvature(tau)?.is_zero())
    }

    /// The same algebra with differential `∂ + [τ, −]`; `(∂^τ)² = 0` is
    /// re-verified on the matrices.
    pub fn twist(&self, tau: &SparseVec) -> Result<ConvolutionDgLie, CeError> {
        let curv = self.mc_curvature(tau)?;
        if !curv.is_zero() {
            let first = curv.leading().map(|(i, _)| self.label(-2, i).to_string()).unwrap_or_default();
            return Err(CeError::NotMaurerCartan(format!("∂τ + ½[τ,τ] ≠ 0 at {first}")));
        }
        let mut out = ConvolutionDgLie {
            twist: Some(tau.clone()),
            ..self.clone()
        };
        out.complex = out.build_complex()?;
        Ok(out)
    }

    /// Membership in `F^k = Hom(C̄, L⟨k⟩)`.
    pub fn in_filtration(&self, k: i64, n: i64, f: &SparseVec) -> Result<bool, CeError> {
        let x = &self.tables.target;
        for (w, v) in self.values(n, f)? {
            let t = w.0 + n;
            if t < k || (t == k && !x.d_coords(t, &v)?.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A basis of `F^k` in degree `n`.
    pub fn filtration_stage(&self, k: i64, n: i64) -> Result<Vec<SparseVec>, CeError> {
        let x = &self.tables.target;
        let cells = self.cells(n)?;
        let mut basis = Vec::new();
        let cycles = if k >= 1 && k <= x.cutoff() {
            kernel(x.d_matrix(k)?)
        } else {
            Vec::new()
        };
        let mut words_at_k: Vec<WordId> = Vec::new();
        for (i, (w, _)) in cells.cells.iter().enumerate() {
            let t = w.0 + n;
            if t > k {
                basis.push(SparseVec::unit(i));
            } else if t == k && !words_at_k.contains(w) {
                words_at_k.push(*w);
            }
        }
        for w in words_at_k {
            for z in &cycles {
                let vals: WordValues = [(w, z.clone())].into_iter().collect();
                basis.push(self.from_values(n, &vals)?);
            }
        }
        Ok(basis)
    }

    /// `F^k` is a subcomplex and `[F^p, F^q] ⊆ F^{max(p,q)}` on basis
    /// elements of the stages, for `1 ≤ k ≤ k_max` and degrees up to `top`.
    pub fn check_filtration(&self, k_max: i64, top: i64) -> Result<LawCheck, CeError> {
        let (lo, hi) = self.valid;
        let top = top.min(hi);
        let mut checked = 0;
        for k in 1..=k_max {
            for n in (lo + 1)..=top {
                for f in self.filtration_stage(k, n)? {
                    checked += 1;
                    if !self.in_filtration(k, n - 1, &self.differential(n, &f)?)? {
                        return Ok(law("filtration", checked, Some(format!("∂ leaves F^{k} in degree {n}"))));
                    }
                }
            }
            for p_stage in 1..=k {
                for a in lo..=top {
                    for b in lo..=top {
                        if a + b < lo || a + b > top {
                            continue;
                        }
                        let fs = self.filtration_stage(p_stage, a)?;
                        let gs = self.filtration_stage(k, b)?;
                        for f in &fs {
                            for g in &gs {
                                checked += 1;
                                let z = self.bracket(a, f, b, g)?;
                                if !self.in_filtration(k, a + b, &z)? {
                                    return Ok(law(
                                        "filtration",
                                        checked,
                                        Some(format!("[F^{p_stage}_{a}, F^{k}_{b}] ⊄ F^{k}")),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(law("filtration", checked, None))
    }

    /// Human-readable per-word values.
    pub fn format(&self, n: i64, f: &SparseVec) -> String {
        let x = &self.tables.target;
        match self.values(n, f) {
            Err(e) => e.to_string(),
            Ok(v) if v.is_empty() => "0".into(),
            Ok(v) => v
                .iter()
                .map(|(w, val)| format!("{} ↦ {}", self.tables.ce.label(*w), x.format_coords(w.0 + n, val)))
                .collect::<Vec<_>>()
                .join(", "),
        }
    }
}

fn lie_err(e: CeError) -> LieError {
    match e {
        CeError::Lie(e) => e,
        other => LieError::InvalidModel(other.to_string()),
    }
}

impl DgLieAlgebra for ConvolutionDgLie {
    fn valid_range(&self) -> DegreeRange {
        self.valid
    }

    fn dim(&self, n: i64) -> Result<usize, LieError> {
        ConvolutionDgLie::dim(self, n).map_err(lie_err)
    }

    fn basis_label(&self, n: i64, i: usize) -> String {
        self.label(n, i).to_string()
    }

    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        ConvolutionDgLie::differential(self, n, x).map_err(lie_err)
    }

    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        ConvolutionDgLie::bracket(self, p, x, q, y).map_err(lie_err)
    }
}

fn same_algebra(a: &FreeGradedLie, b: &FreeGradedLie) -> bool {
    a.generators() == b.generators() && a.d_images() == b.d_images()
}

/// `τ = i∘π_A` as a degree −1 element of `conv`, checked to be Maurer–Cartan.
pub fn tau_from_inclusion(conv: &ConvolutionDgLie, i: &LieMorphism) -> Result<SparseVec, CeError> {
    if !same_algebra(i.source(), conv.source()) || !same_algebra(i.target(), conv.target()) {
        return Err(CeError::Incompatible(
            "the morphism does not run between the convolution's source and target".into(),
        ));
    }
    let ce = conv.coalgebra();
    let a = conv.source();
    let x = conv.target();
    let mut vals: WordValues = BTreeMap::new();
    for n in 1..ce.cutoff() {
        for b in 0..a.dim(n)? {
            let img = i.apply(&a.basis_element(n, b))?;
            let v = x.coordinates(&img)?;
            if !v.is_zero() {
                vals.insert(ce.suspension(n, b)?, v);
            }
        }
    }
    let tau = conv.from_values(-1, &vals)?;
    let curv = conv.mc_curvature(&tau)?;
    if !curv.is_zero() {
        return Err(CeError::MCViolation {
            word: curv.leading().map(|(k, _)| conv.label(-2, k).to_string()).unwrap_or_default(),
            detail: "∂τ + ½[τ,τ] ≠ 0".into(),
        });
    }
    Ok(tau)
}

/// `τ_*(θ) = −(−1)^{|θ|} θ∘τ` for a derivation `θ` of `L_X` of degree `k`.
pub fn pushforward_tau(
    conv: &ConvolutionDgLie,
    tau: &SparseVec,
    der: &DerivationComplex,
    k: i64,
    theta: &SparseVec,
) -> Result<SparseVec, CeError> {
    if der.kind() == DerivationKind::FDerivations || !same_algebra(der.target(), conv.target()) {
        return Err(CeError::Incompatible("θ must be a derivation of the convolution's target".into()));
    }
    let x = conv.target();
    let sign = -Rational::sign(k);
    let mut out: WordValues = BTreeMap::new();
    for (w, v) in conv.values(-1, tau)? {
        let elem = x.element(w.0 - 1, &v)?;
        let img = der.apply(k, theta, &elem)?;
        let c = x.coordinates_unchecked(&img)?;
        if !c.is_zero() {
            out.insert(w, c.scale(&sign));
        }
    }
    conv.from_values(k - 1, &out)
}
