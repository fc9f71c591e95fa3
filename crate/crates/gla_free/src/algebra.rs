use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use exactlin::{ChainComplex, DegreeRange, GradedVectorSpace, Rational, SparseMatrix, SparseVec};
use rayon::prelude::*;

use crate::basis::{build_bases, DegreeBasis, LeadCollector};
use crate::element::LieElement;
use crate::error::{check_degree, LieError};
use crate::generators::GeneratorSet;
use crate::tensor::{apply_derivation, commutator_terms, derivation_terms, TensorPoly};

type BracketKey = (i64, usize, i64, usize);

/// Free graded Lie algebra `L(V)` with a differential given on generators,
/// represented in degrees `0..=cutoff`.
pub struct FreeGradedLie {
    gens: GeneratorSet,
    names: Vec<String>,
    letter_degrees: Vec<i64>,
    d_images: Vec<Option<TensorPoly>>,
    cutoff: i64,
    bases: Vec<DegreeBasis>,
    complex: ChainComplex,
    bracket_cache: RwLock<HashMap<BracketKey, SparseVec>>,
}

impl std::fmt::Debug for FreeGradedLie {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FreeGradedLie")
            .field("generators", &self.names)
            .field("degrees", &self.letter_degrees)
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl FreeGradedLie {
    /// Zero differential.
    pub fn free(gens: GeneratorSet, cutoff: i64) -> Result<Self, LieError> {
        Self::new(gens, Vec::<(String, LieElement)>::new(), cutoff)
    }

    /// Generators without an entry in `differential` are cycles. Fails unless
    /// every `d(g)` is a homogeneous Lie element of degree `|g| − 1` and
    /// `d² = 0` on generators.
    pub fn new<S: AsRef<str>>(
        gens: GeneratorSet,
        differential: impl IntoIterator<Item = (S, LieElement)>,
        cutoff: i64,
    ) -> Result<Self, LieError> {
        if cutoff < gens.max_degree() {
            return Err(LieError::InvalidModel(format!(
                "cutoff {cutoff} is below the top generator degree {}",
                gens.max_degree()
            )));
        }
        let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
        let letter_degrees = gens.degrees();
        let mut d_images: Vec<Option<TensorPoly>> = vec![None; gens.len()];
        for (name, value) in differential {
            let name = name.as_ref();
            let i = gens
                .index_of(name)
                .ok_or_else(|| LieError::UnknownGenerator(name.to_string()))?;
            if value.is_zero() {
                continue;
            }
            let want = letter_degrees[i] - 1;
            if value.degree() != want || !value.is_homogeneous(&letter_degrees) {
                return Err(LieError::DegreeMismatch {
                    what: format!("d({name})"),
                    expected: want,
                    found: value.degree(),
                });
            }
            d_images[i] = Some(value.into_poly());
        }
        for (i, img) in d_images.iter().enumerate() {
            if let Some(p) = img {
                let dd = apply_derivation(p, -1, &d_images, &letter_degrees);
                if !dd.is_zero() {
                    return Err(LieError::InvalidModel(format!(
                        "d∘d({}) = {} ≠ 0",
                        names[i],
                        dd.display(&names)
                    )));
                }
            }
        }
        let bases = build_bases(&names, &letter_degrees, cutoff)?;
        for (i, img) in d_images.iter().enumerate() {
            if let Some(p) = img {
                let basis = &bases[(letter_degrees[i] - 1) as usize];
                let mut c = basis.collector();
                c.add_poly(p, &Rational::one());
                if basis.expand(&c.finish()) != *p {
                    return Err(LieError::NotInLieSubspace(format!(
                        "d({}) = {}",
                        names[i],
                        p.display(&names)
                    )));
                }
            }
        }
        let complex = build_complex(&bases, &d_images, &letter_degrees, cutoff)?;
        Ok(FreeGradedLie {
            gens,
            names,
            letter_degrees,
            d_images,
            cutoff,
            bases,
            complex,
            bracket_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn letter_degrees(&self) -> &[i64] {
        &self.letter_degrees
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    /// Degrees `0..=cutoff`; everything below is zero.
    pub fn valid_range(&self) -> DegreeRange {
        (0, self.cutoff)
    }

    /// Images of the generators under `d`, as derivation data.
    pub fn d_images(&self) -> &[Option<TensorPoly>] {
        &self.d_images
    }

    pub fn generator(&self, name: &str) -> Result<LieElement, LieError> {
        LieElement::generator(&self.gens, name)
    }

    pub fn generator_at(&self, i: usize) -> LieElement {
        LieElement::from_poly(self.letter_degrees[i], TensorPoly::letter(i as u8))
    }

    pub fn d_of_generator(&self, i: usize) -> LieElement {
        LieElement::from_poly(
            self.letter_degrees[i] - 1,
            self.d_images[i].clone().unwrap_or_default(),
        )
    }

    /// Zero outside the represented window below; error above the cutoff.
    pub fn dim(&self, n: i64) -> Result<usize, LieError> {
        if n < 0 {
            return Ok(0);
        }
        check_degree(n, self.valid_range())?;
        Ok(self.bases[n as usize].len())
    }

    pub fn labels(&self, n: i64) -> Result<Vec<&str>, LieError> {
        if n < 0 {
            return Ok(Vec::new());
        }
        check_degree(n, self.valid_range())?;
        Ok(self.bases[n as usize]
            .elements
            .iter()
            .map(|e| e.label.as_str())
            .collect())
    }

    pub fn label(&self, n: i64, i: usize) -> &str {
        &self.bases[n as usize].elements[i].label
    }

    /// Bracket length of basis element `i` in degree `n`.
    pub fn bracket_length(&self, n: i64, i: usize) -> usize {
        self.bases[n as usize].elements[i].length
    }

    /// Ordered basis of degree `n`.
    pub fn lie_basis(&self, n: i64) -> Result<Vec<LieElement>, LieError> {
        let dim = self.dim(n)?;
        Ok((0..dim).map(|i| self.basis_element(n, i)).collect())
    }

    pub fn basis_element(&self, n: i64, i: usize) -> LieElement {
        LieElement::from_poly(n, self.bases[n as usize].elements[i].poly.clone())
    }

    pub fn basis_poly(&self, n: i64, i: usize) -> &TensorPoly {
        &self.bases[n as usize].elements[i].poly
    }

    pub fn element(&self, n: i64, coords: &SparseVec) -> Result<LieElement, LieError> {
        if coords.is_zero() {
            return Ok(LieElement::zero(n));
        }
        check_degree(n, self.valid_range())?;
        Ok(LieElement::from_poly(n, self.bases[n as usize].expand(coords)))
    }

    /// Collector computing coordinates in degree `n` from streamed terms of
    /// an element known to lie in the Lie subalgebra.
    pub fn collector(&self, n: i64) -> Result<Option<LeadCollector<'_>>, LieError> {
        if n < 0 {
            return Ok(None);
        }
        check_degree(n, self.valid_range())?;
        Ok(Some(self.bases[n as usize].collector()))
    }

    /// Coordinates, verifying membership in the Lie subalgebra.
    pub fn coordinates(&self, x: &LieElement) -> Result<SparseVec, LieError> {
        let coords = self.coordinates_unchecked(x)?;
        if !x.is_zero() && self.bases[x.degree() as usize].expand(&coords) != *x.poly() {
            return Err(LieError::NotInLieSubspace(x.poly().display(&self.names)));
        }
        Ok(coords)
    }

    /// Coordinates of an element known to be a Lie element.
    pub fn coordinates_unchecked(&self, x: &LieElement) -> Result<SparseVec, LieError> {
        if x.is_zero() {
            return Ok(SparseVec::new());
        }
        if !x.is_homogeneous(&self.letter_degrees) {
            return Err(LieError::NotInLieSubspace(x.poly().display(&self.names)));
        }
        match self.collector(x.degree())? {
            None => Err(LieError::NotInLieSubspace(x.poly().display(&self.names))),
            Some(mut c) => {
                c.add_poly(x.poly(), &Rational::one());
                Ok(c.finish())
            }
        }
    }

    /// `[x, y]`; fails if the result lies above the cutoff.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement, LieError> {
        check_degree(x.degree() + y.degree(), (i64::MIN, self.cutoff))?;
        Ok(LieElement::commutator(x, y))
    }

    pub fn apply_d(&self, x: &LieElement) -> Result<LieElement, LieError> {
        check_degree(x.degree(), (i64::MIN, self.cutoff))?;
        Ok(LieElement::from_poly(
            x.degree() - 1,
            apply_derivation(x.poly(), -1, &self.d_images, &self.letter_degrees),
        ))
    }

    /// `d` on coordinates of degree `n`.
    pub fn d_coords(&self, n: i64, x: &SparseVec) -> Result<SparseVec, LieError> {
        if x.is_zero() || n <= 0 {
            return Ok(SparseVec::new());
        }
        Ok(self.d_matrix(n)?.apply(x))
    }

    /// `d_n : L_n → L_{n−1}`.
    pub fn d_matrix(&self, n: i64) -> Result<&SparseMatrix, LieError> {
        check_degree(n, (1, self.cutoff))?;
        Ok(self.complex.d(n)?)
    }

    /// `(L, d)` as a chain complex on degrees `0..=cutoff`.
    pub fn chain_complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn space(&self) -> &Arc<GradedVectorSpace> {
        self.complex.space()
    }

    /// Coordinates of `[b_i, b_j]` for basis elements of degrees `p`, `q`.
    pub fn bracket_basis(&self, p: i64, i: usize, q: i64, j: usize) -> Result<SparseVec, LieError> {
        check_degree(p + q, (i64::MIN, self.cutoff))?;
        let key = (p, i, q, j);
        if let Some(v) = self.bracket_cache.read().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let mut c = self.bases[(p + q) as usize].collector();
        commutator_terms(self.basis_poly(p, i), p, self.basis_poly(q, j), q, &mut |w, v| {
            c.add(w, &v)
        });
        let v = c.finish();
        self.bracket_cache
            .write()
            .expect("cache poisoned")
            .insert(key, v.clone());
        Ok(v)
    }

    /// Bracket on coordinates.
    pub fn bracket_coords(
        &self,
        p: i64,
        x: &SparseVec,
        q: i64,
        y: &SparseVec,
    ) -> Result<SparseVec, LieError> {
        if x.is_zero() || y.is_zero() {
            return Ok(SparseVec::new());
        }
        check_degree(p + q, (i64::MIN, self.cutoff))?;
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let ab = a * b;
                for (k, c) in self.bracket_basis(p, i, q, j)?.iter() {
                    *acc.entry(k).or_default() += c * &ab;
                }
            }
        }
        Ok(SparseVec::from_map(acc))
    }

    /// Coordinates (degree `x.degree() + degree`) of `θ(x)` for the
    /// derivation `θ` given by `images` on generators.
    pub fn derivation_coords(
        &self,
        x: &TensorPoly,
        x_degree: i64,
        degree: i64,
        images: &[Option<TensorPoly>],
    ) -> Result<SparseVec, LieError> {
        match self.collector(x_degree + degree)? {
            None => Ok(SparseVec::new()),
            Some(mut c) => {
                derivation_terms(x, degree, images, &self.letter_degrees, &mut |w, v| c.add(w, &v));
                Ok(c.finish())
            }
        }
    }

    /// Human-readable combination of basis labels.
    pub fn format_coords(&self, n: i64, x: &SparseVec) -> String {
        format_combination(x.iter().map(|(i, c)| (self.label(n, i).to_string(), c.clone())))
    }

    pub fn format_element(&self, x: &LieElement) -> String {
        x.poly().display(&self.names)
    }
}

fn build_complex(
    bases: &[DegreeBasis],
    d_images: &[Option<TensorPoly>],
    letter_degrees: &[i64],
    cutoff: i64,
) -> Result<ChainComplex, LieError> {
    let parts = (0..=cutoff).map(|n| {
        let labels: Vec<String> = bases[n as usize]
            .elements
            .iter()
            .map(|e| e.label.clone())
            .collect();
        (n, labels)
    });
    let space = GradedVectorSpace::new((0, cutoff), parts)?;
    let d: BTreeMap<i64, SparseMatrix> = (1..=cutoff)
        .into_par_iter()
        .map(|n| {
            let src = &bases[n as usize];
            let tgt = &bases[(n - 1) as usize];
            let cols = src
                .elements
                .par_iter()
                .map(|e| {
                    let mut c = tgt.collector();
                    derivation_terms(&e.poly, -1, d_images, letter_degrees, &mut |w, v| {
                        c.add(w, &v)
                    });
                    c.finish()
                })
                .collect();
            (n, SparseMatrix::from_columns(tgt.len(), cols))
        })
        .collect();
    Ok(ChainComplex::new(space, d)?)
}

/// `2*[a,a] - [b,a]` style rendering; `0` when empty.
pub fn format_combination(terms: impl IntoIterator<Item = (String, Rational)>) -> String {
    let mut out = String::new();
    for (k, (label, c)) in terms.into_iter().enumerate() {
        let (neg, mag) = if c.is_negative() { (true, -&c) } else { (false, c.clone()) };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag}*"));
        }
        out.push_str(&label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
