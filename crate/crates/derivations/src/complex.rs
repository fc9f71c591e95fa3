use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use exactlin::{
    ChainComplex, DegreeRange, kernel_with_free_columns, GradedVectorSpace, Rational, SparseMatrix, SparseVec,
};
use gla_free::tensor::{apply_derivation, apply_f_derivation};
use gla_free::{DgLieAlgebra, FreeGradedLie, LieElement, LieError, LieMorphism, TensorPoly};
use rayon::prelude::*;

use crate::error::DerError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivationKind {
    /// All derivations of `L`.
    Full,
    /// Derivations of `L_X` vanishing on the generators of a free extension.
    Relative,
    /// Derivations annihilating a given list of elements.
    VanishingOnElements,
    /// Derivations along a morphism `f: L_A → L_X`.
    FDerivations,
}

impl DerivationKind {
    pub fn name(&self) -> &'static str {
        match self {
            DerivationKind::Full => "full",
            DerivationKind::Relative => "relative",
            DerivationKind::VanishingOnElements => "vanishing",
            DerivationKind::FDerivations => "f-derivation",
        }
    }
}

/// A source generator on which derivations take free values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub generator: usize,
    pub name: String,
    pub degree: i64,
}

/// A homogeneous derivation given by its values on the slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub degree: i64,
    pub values: Vec<(String, LieElement)>,
}

struct Subspace {
    vectors: Vec<SparseVec>,
    free_cols: Vec<usize>,
}

struct DegreeData {
    /// `(slot, target basis index)`, sorted by label.
    cells: Vec<(usize, usize)>,
    labels: Vec<String>,
    index: HashMap<(usize, usize), usize>,
    sub: Option<Subspace>,
}

/// Derivations with values in a free graded Lie algebra, as a chain complex
/// with `D(θ) = d∘θ − (−1)^{|θ|} θ∘d` and, except for f-derivations, the
/// bracket `[θ,φ] = θ∘φ − (−1)^{|θ||φ|} φ∘θ`.
///
/// A derivation of degree `n` is stored by its values `θ(g) ∈ L_{|g|+n}` on
/// the slots; the valid range stops where those values leave the target's
/// cutoff.
pub struct DerivationComplex {
    kind: DerivationKind,
    source: Arc<FreeGradedLie>,
    target: Arc<FreeGradedLie>,
    morphism: Option<LieMorphism>,
    slots: Vec<Slot>,
    valid: DegreeRange,
    degrees: BTreeMap<i64, DegreeData>,
    vanishing: Vec<LieElement>,
    complex: ChainComplex,
}

impl std::fmt::Debug for DerivationComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DerivationComplex")
            .field("kind", &self.kind)
            .field("slots", &self.slots)
            .field("valid", &self.valid)
            .finish()
    }
}

fn lie_err(e: DerError) -> LieError {
    match e {
        DerError::Lie(e) => e,
        other => LieError::InvalidModel(other.to_string()),
    }
}

impl DerivationComplex {
    pub(crate) fn assemble(
        kind: DerivationKind,
        source: Arc<FreeGradedLie>,
        target: Arc<FreeGradedLie>,
        morphism: Option<LieMorphism>,
        slots: Vec<Slot>,
        hi: i64,
        vanishing: Vec<LieElement>,
    ) -> Result<Self, DerError> {
        let max_slot = slots.iter().map(|s| s.degree).max();
        let lo = max_slot.map_or(0, |m| -m);
        let reach = max_slot.unwrap_or(0).max(vanishing.iter().map(|s| s.degree()).max().unwrap_or(0));
        if hi < lo || hi + reach > target.cutoff() {
            return Err(LieError::range((lo, hi + reach), target.valid_range()).into());
        }
        let mut degrees = BTreeMap::new();
        for n in lo..=hi {
            let mut cells = Vec::new();
            let mut labels = Vec::new();
            for (k, s) in slots.iter().enumerate() {
                let m = s.degree + n;
                for b in 0..target.dim(m)? {
                    cells.push((k, b));
                    labels.push(format!("{}->{}", s.name, target.label(m, b)));
                }
            }
            let mut order: Vec<usize> = (0..cells.len()).collect();
            order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
            let cells: Vec<(usize, usize)> = order.iter().map(|&i| cells[i]).collect();
            let labels: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();
            let index = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
            degrees.insert(
                n,
                DegreeData {
                    cells,
                    labels,
                    index,
                    sub: None,
                },
            );
        }
        let mut der = DerivationComplex {
            kind,
            source,
            target,
            morphism,
            slots,
            valid: (lo, hi),
            degrees,
            vanishing,
            complex: ChainComplex::new(GradedVectorSpace::zero((0, 0)), BTreeMap::new())?,
        };
        if kind == DerivationKind::VanishingOnElements {
            der.build_subspaces()?;
        }
        der.complex = der.build_complex()?;
        if kind == DerivationKind::VanishingOnElements {
            der.check_bracket_closure()?;
        }
        Ok(der)
    }

    fn build_subspaces(&mut self) -> Result<(), DerError> {
        let (lo, hi) = self.valid;
        let subs: Vec<(i64, Subspace)> = (lo..=hi)
            .into_par_iter()
            .map(|n| {
                let dim = self.degrees[&n].cells.len();
                let mut rows_total = 0usize;
                let mut offsets = Vec::new();
                for s in &self.vanishing {
                    offsets.push(rows_total);
                    rows_total += self.target.dim(s.degree() + n)?;
                }
                let cols = (0..dim)
                    .map(|j| {
                        let images = self.images(n, &SparseVec::unit(j))?;
                        let mut entries = Vec::new();
                        for (k, s) in self.vanishing.iter().enumerate() {
                            let v = self.target.derivation_coords(s.poly(), s.degree(), n, &images)?;
                            entries.extend(v.iter().map(|(i, c)| (offsets[k] + i, c.clone())));
                        }
                        Ok(SparseVec::from_entries(entries))
                    })
                    .collect::<Result<Vec<_>, DerError>>()?;
                let (free_cols, vectors) =
                    kernel_with_free_columns(&SparseMatrix::from_columns(rows_total, cols));
                Ok((n, Subspace { vectors, free_cols }))
            })
            .collect::<Result<_, DerError>>()?;
        for (n, s) in subs {
            self.degrees.get_mut(&n).expect("degree").sub = Some(s);
        }
        Ok(())
    }

    fn build_complex(&self) -> Result<ChainComplex, DerError> {
        let (lo, hi) = self.valid;
        let parts = (lo..=hi).map(|n| (n, self.labels(n).expect("valid degree")));
        let space = GradedVectorSpace::new((lo, hi), parts)?;
        let d: BTreeMap<i64, SparseMatrix> = ((lo + 1)..=hi)
            .into_par_iter()
            .map(|n| {
                let cols = (0..self.dim(n)?)
                    .into_par_iter()
                    .map(|j| self.differential(n, &SparseVec::unit(j)))
                    .collect::<Result<Vec<_>, DerError>>()?;
                Ok((n, SparseMatrix::from_columns(self.dim(n - 1)?, cols)))
            })
            .collect::<Result<_, DerError>>()?;
        Ok(ChainComplex::new(space, d)?)
    }

    fn check_bracket_closure(&self) -> Result<(), DerError> {
        let (lo, hi) = self.valid;
        for p in lo..=hi {
            for q in p..=hi {
                if p + q < lo || p + q > hi {
                    continue;
                }
                for i in 0..self.dim(p)? {
                    for j in 0..self.dim(q)? {
                        let (x, y) = (SparseVec::unit(i), SparseVec::unit(j));
                        let z = self.full_bracket(p, &self.to_full(p, &x), q, &self.to_full(q, &y))?;
                        if self.from_full(p + q, &z).is_none() {
                            return Err(DerError::NotClosed {
                                operation: "bracket".into(),
                                witness: format!(
                                    "[{}, {}] in degree {}",
                                    self.label(p, i),
                                    self.label(q, j),
                                    p + q
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> DerivationKind {
        self.kind
    }

    pub fn source(&self) -> &Arc<FreeGradedLie> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FreeGradedLie> {
        &self.target
    }

    pub fn morphism(&self) -> Option<&LieMorphism> {
        self.morphism.as_ref()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn vanishing_elements(&self) -> &[LieElement] {
        &self.vanishing
    }

    pub fn valid_range(&self) -> DegreeRange {
        self.valid
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    fn data(&self, n: i64) -> Result<&DegreeData, DerError> {
        self.degrees
            .get(&n)
            .ok_or_else(|| LieError::range((n, n), self.valid).into())
    }

    pub fn dim(&self, n: i64) -> Result<usize, DerError> {
        let d = self.data(n)?;
        Ok(match &d.sub {
            Some(s) => s.vectors.len(),
            None => d.cells.len(),
        })
    }

    /// Dimension of the space of all slot values in degree `n`.
    pub fn full_dim(&self, n: i64) -> Result<usize, DerError> {
        Ok(self.data(n)?.cells.len())
    }

    pub fn labels(&self, n: i64) -> Result<Vec<String>, DerError> {
        let d = self.data(n)?;
        Ok(match &d.sub {
            Some(s) => s.free_cols.iter().map(|&c| d.labels[c].clone()).collect(),
            None => d.labels.clone(),
        })
    }

    pub fn label(&self, n: i64, i: usize) -> String {
        let d = &self.degrees[&n];
        match &d.sub {
            Some(s) => d.labels[s.free_cols[i]].clone(),
            None => d.labels[i].clone(),
        }
    }

    /// Coordinates over all slot values.
    pub fn to_full(&self, n: i64, x: &SparseVec) -> SparseVec {
        match &self.degrees[&n].sub {
            None => x.clone(),
            Some(s) => {
                let mut acc = SparseVec::new();
                for (i, c) in x.iter() {
                    acc = acc.add_scaled(&s.vectors[i], c);
                }
                acc
            }
        }
    }

    /// Basis coordinates of a full-coordinate derivation, if it belongs here.
    pub fn from_full(&self, n: i64, x: &SparseVec) -> Option<SparseVec> {
        let d = self.degrees.get(&n)?;
        match &d.sub {
            None => Some(x.clone()),
            Some(s) => {
                let coords = SparseVec::from_entries(
                    s.free_cols.iter().enumerate().map(|(k, &f)| (k, x.get(f))),
                );
                (self.to_full(n, &coords) == *x).then_some(coords)
            }
        }
    }

    /// Per-slot values (target coordinates) of a full-coordinate vector.
    fn split(&self, n: i64, full: &SparseVec) -> Vec<SparseVec> {
        let cells = &self.degrees[&n].cells;
        let mut parts: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.slots.len()];
        for (i, c) in full.iter() {
            let (s, b) = cells[i];
            parts[s].push((b, c.clone()));
        }
        parts.into_iter().map(SparseVec::from_entries).collect()
    }

    fn join(&self, n: i64, parts: &[SparseVec]) -> SparseVec {
        let index = &self.degrees[&n].index;
        SparseVec::from_entries(
            parts
                .iter()
                .enumerate()
                .flat_map(|(s, v)| v.iter().map(move |(b, c)| (index[&(s, b)], c.clone()))),
        )
    }

    /// Letter-indexed images for applying a full-coordinate derivation.
    fn images_full(&self, n: i64, full: &SparseVec) -> Result<Vec<Option<TensorPoly>>, DerError> {
        let mut images = vec![None; self.source.generators().len()];
        for (k, v) in self.split(n, full).iter().enumerate() {
            if !v.is_zero() {
                let s = &self.slots[k];
                images[s.generator] = Some(self.target.element(s.degree + n, v)?.into_poly());
            }
        }
        Ok(images)
    }

    /// Letter-indexed images of a derivation given in basis coordinates.
    pub fn images(&self, n: i64, x: &SparseVec) -> Result<Vec<Option<TensorPoly>>, DerError> {
        self.data(n)?;
        self.images_full(n, &self.to_full(n, x))
    }

    fn f_images(&self) -> Vec<TensorPoly> {
        self.morphism
            .as_ref()
            .map(|f| f.images().to_vec())
            .unwrap_or_default()
    }

    /// `θ(x)` for an element of the source algebra.
    pub fn apply(&self, n: i64, theta: &SparseVec, x: &LieElement) -> Result<LieElement, DerError> {
        let images = self.images(n, theta)?;
        let poly = if self.kind == DerivationKind::FDerivations {
            apply_f_derivation(
                x.poly(),
                n,
                &images,
                &self.f_images(),
                self.source.letter_degrees(),
            )
        } else {
            apply_derivation(x.poly(), n, &images, self.source.letter_degrees())
        };
        Ok(LieElement::from_poly(x.degree() + n, poly))
    }

    fn full_differential(&self, n: i64, full: &SparseVec) -> Result<SparseVec, DerError> {
        if full.is_zero() || n <= self.valid.0 {
            return Ok(SparseVec::new());
        }
        let images = self.images_full(n, full)?;
        let parts = self.split(n, full);
        let sign = Rational::sign(n);
        let f_images = self.f_images();
        let mut out = Vec::with_capacity(self.slots.len());
        for (k, s) in self.slots.iter().enumerate() {
            let m = s.degree + n - 1;
            let mut value = self.target.d_coords(s.degree + n, &parts[k])?;
            if let Some(dg) = &self.source.d_images()[s.generator] {
                let theta_dg = if self.kind == DerivationKind::FDerivations {
                    let p = apply_f_derivation(dg, n, &images, &f_images, self.source.letter_degrees());
                    match self.target.collector(m)? {
                        None => SparseVec::new(),
                        Some(mut c) => {
                            c.add_poly(&p, &Rational::one());
                            c.finish()
                        }
                    }
                } else {
                    self.target.derivation_coords(dg, s.degree - 1, n, &images)?
                };
                value = value.add_scaled(&theta_dg, &-&sign);
            }
            out.push(value);
        }
        Ok(self.join(n - 1, &out))
    }

    /// `D` on basis coordinates of degree `n`.
    pub fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, DerError> {
        self.data(n)?;
        if n <= self.valid.0 {
            return Ok(SparseVec::new());
        }
        let y = self.full_differential(n, &self.to_full(n, x))?;
        self.from_full(n - 1, &y).ok_or_else(|| DerError::NotClosed {
            operation: "D".into(),
            witness: format!("D of a degree-{n} element leaves the complex"),
        })
    }

    fn full_bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, DerError> {
        if self.kind == DerivationKind::FDerivations {
            return Err(DerError::Unsupported(self.kind.name().into()));
        }
        let r = p + q;
        if r < self.valid.0 || r > self.valid.1 {
            return Err(LieError::range((r, r), self.valid).into());
        }
        if x.is_zero() || y.is_zero() {
            return Ok(SparseVec::new());
        }
        let (ix, iy) = (self.images_full(p, x)?, self.images_full(q, y)?);
        let sign = Rational::sign(p * q);
        let mut out = Vec::with_capacity(self.slots.len());
        for s in &self.slots {
            let g = s.generator;
            let mut value = SparseVec::new();
            if let Some(yg) = &iy[g] {
                value = self.target.derivation_coords(yg, s.degree + q, p, &ix)?;
            }
            if let Some(xg) = &ix[g] {
                let t = self.target.derivation_coords(xg, s.degree + p, q, &iy)?;
                value = value.add_scaled(&t, &-&sign);
            }
            out.push(value);
        }
        Ok(self.join(r, &out))
    }

    /// Bracket on basis coordinates.
    pub fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, DerError> {
        self.data(p)?;
        self.data(q)?;
        let z = self.full_bracket(p, &self.to_full(p, x), q, &self.to_full(q, y))?;
        self.from_full(p + q, &z).ok_or_else(|| DerError::NotClosed {
            operation: "bracket".into(),
            witness: format!("bracket of degrees {p}, {q}"),
        })
    }

    /// Basis coordinates of the derivation with the given values on slots
    /// (missing slots are zero).
    pub fn from_values<S: AsRef<str>>(
        &self,
        n: i64,
        values: impl IntoIterator<Item = (S, LieElement)>,
    ) -> Result<SparseVec, DerError> {
        self.data(n)?;
        let mut parts = vec![SparseVec::new(); self.slots.len()];
        for (name, v) in values {
            let name = name.as_ref();
            let k = self
                .slots
                .iter()
                .position(|s| s.name == name)
                .ok_or_else(|| DerError::NotInComplex(format!("no free slot for generator {name}")))?;
            if v.is_zero() {
                continue;
            }
            let want = self.slots[k].degree + n;
            if v.degree() != want {
                return Err(LieError::DegreeMismatch {
                    what: format!("value on {name}"),
                    expected: want,
                    found: v.degree(),
                }
                .into());
            }
            parts[k] = self.target.coordinates(&v)?;
        }
        let full = self.join(n, &parts);
        self.from_full(n, &full)
            .ok_or_else(|| DerError::NotInComplex("values do not satisfy the vanishing condition".into()))
    }

    /// Basis coordinates from per-slot values given in target coordinates.
    pub fn from_slot_coords(&self, n: i64, parts: &[SparseVec]) -> Result<SparseVec, DerError> {
        self.data(n)?;
        self.from_full(n, &self.join(n, parts))
            .ok_or_else(|| DerError::NotInComplex("values do not satisfy the vanishing condition".into()))
    }

    pub fn derivation(&self, n: i64, x: &SparseVec) -> Result<Derivation, DerError> {
        self.data(n)?;
        let parts = self.split(n, &self.to_full(n, x));
        let values = self
            .slots
            .iter()
            .zip(parts)
            .map(|(s, v)| Ok((s.name.clone(), self.target.element(s.degree + n, &v)?)))
            .collect::<Result<_, DerError>>()?;
        Ok(Derivation { degree: n, values })
    }

    /// `θ ↦ θ(g)` from degree `n` to `L_{|g|+n}`.
    pub fn evaluation_matrix(&self, n: i64, generator: &str) -> Result<SparseMatrix, DerError> {
        let k = self
            .slots
            .iter()
            .position(|s| s.name == generator)
            .ok_or_else(|| DerError::NotInComplex(format!("no free slot for generator {generator}")))?;
        let rows = self.target.dim(self.slots[k].degree + n)?;
        let cols = (0..self.dim(n)?)
            .map(|j| self.split(n, &self.to_full(n, &SparseVec::unit(j)))[k].clone())
            .collect();
        Ok(SparseMatrix::from_columns(rows, cols))
    }

    /// Human-readable values of a derivation.
    pub fn format(&self, n: i64, x: &SparseVec) -> String {
        match self.derivation(n, x) {
            Err(e) => e.to_string(),
            Ok(d) => {
                let parts: Vec<String> = d
                    .values
                    .iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(g, v)| {
                        let c = self.target.coordinates_unchecked(v).unwrap_or_default();
                        format!("{g} ↦ {}", self.target.format_coords(v.degree(), &c))
                    })
                    .collect();
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(", ")
                }
            }
        }
    }
}

impl DgLieAlgebra for DerivationComplex {
    fn valid_range(&self) -> DegreeRange {
        self.valid
    }

    fn dim(&self, n: i64) -> Result<usize, LieError> {
        DerivationComplex::dim(self, n).map_err(lie_err)
    }

    fn basis_label(&self, n: i64, i: usize) -> String {
        self.label(n, i)
    }

    fn differential(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        DerivationComplex::differential(self, n, x).map_err(lie_err)
    }

    fn bracket(&self, p: i64, x: &SparseVec, q: i64, y: &SparseVec) -> Result<SparseVec, LieError> {
        DerivationComplex::bracket(self, p, x, q, y).map_err(lie_err)
    }
}
