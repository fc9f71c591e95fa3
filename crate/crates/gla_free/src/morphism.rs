use std::collections::BTreeMap;
use std::sync::Arc;

use exactlin::{GradedLinearMap, SignRule, SparseMatrix};
use rayon::prelude::*;

use crate::algebra::FreeGradedLie;
use crate::element::LieElement;
use crate::error::{check_degree, LieError};
use crate::tensor::{apply_derivation, apply_homomorphism, TensorPoly};

/// Map of free graded Lie algebras determined by the images of the source
/// generators.
#[derive(Clone, Debug)]
pub struct LieMorphism {
    source: Arc<FreeGradedLie>,
    target: Arc<FreeGradedLie>,
    images: Vec<TensorPoly>,
    generator_map: Option<Vec<usize>>,
}

impl LieMorphism {
    /// Source generators missing from `images` go to zero. Each image must be
    /// a Lie element of the generator's degree.
    pub fn new<S: AsRef<str>>(
        source: Arc<FreeGradedLie>,
        target: Arc<FreeGradedLie>,
        images: impl IntoIterator<Item = (S, LieElement)>,
    ) -> Result<Self, LieError> {
        let mut imgs = vec![TensorPoly::zero(); source.generators().len()];
        for (name, x) in images {
            let name = name.as_ref();
            let i = source
                .generators()
                .index_of(name)
                .ok_or_else(|| LieError::UnknownGenerator(name.to_string()))?;
            let want = source.letter_degrees()[i];
            if x.is_zero() {
                continue;
            }
            if x.degree() != want {
                return Err(LieError::DegreeMismatch {
                    what: format!("image of {name}"),
                    expected: want,
                    found: x.degree(),
                });
            }
            target.coordinates(&x)?;
            imgs[i] = x.into_poly();
        }
        let generator_map = free_map(&imgs, target.generators().len());
        Ok(LieMorphism {
            source,
            target,
            images: imgs,
            generator_map,
        })
    }

    pub fn identity(l: Arc<FreeGradedLie>) -> Self {
        let n = l.generators().len();
        LieMorphism {
            source: l.clone(),
            target: l,
            images: (0..n).map(|i| TensorPoly::letter(i as u8)).collect(),
            generator_map: Some((0..n).collect()),
        }
    }

    /// Sends each source generator to the target generator of the same name.
    pub fn inclusion(source: Arc<FreeGradedLie>, target: Arc<FreeGradedLie>) -> Result<Self, LieError> {
        let images: Vec<(String, LieElement)> = source
            .generator_names()
            .iter()
            .map(|n| Ok((n.clone(), target.generator(n)?)))
            .collect::<Result<_, LieError>>()?;
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<FreeGradedLie> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FreeGradedLie> {
        &self.target
    }

    pub fn image(&self, i: usize) -> LieElement {
        LieElement::from_poly(self.source.letter_degrees()[i], self.images[i].clone())
    }

    pub fn images(&self) -> &[TensorPoly] {
        &self.images
    }

    /// Generators go injectively to generators.
    pub fn is_free_extension(&self) -> bool {
        self.generator_map.is_some()
    }

    /// Target generator index of each source generator, for free extensions.
    pub fn generator_map(&self) -> Option<&[usize]> {
        self.generator_map.as_deref()
    }

    pub fn apply(&self, x: &LieElement) -> Result<LieElement, LieError> {
        check_degree(x.degree(), (i64::MIN, self.target.cutoff()))?;
        Ok(LieElement::from_poly(
            x.degree(),
            apply_homomorphism(x.poly(), &self.images),
        ))
    }

    /// Degrees on which both algebras are represented.
    pub fn common_range(&self) -> (i64, i64) {
        (0, self.source.cutoff().min(self.target.cutoff()))
    }

    /// Matrix of the map on degree `n`.
    pub fn matrix(&self, n: i64) -> Result<SparseMatrix, LieError> {
        check_degree(n, self.common_range())?;
        let rows = self.target.dim(n)?;
        let cols = (0..self.source.dim(n)?)
            .into_par_iter()
            .map(|i| {
                let img = apply_homomorphism(self.source.basis_poly(n, i), &self.images);
                let mut c = self.target.collector(n)?.expect("degree is valid");
                c.add_poly(&img, &exactlin::Rational::one());
                Ok(c.finish())
            })
            .collect::<Result<Vec<_>, LieError>>()?;
        Ok(SparseMatrix::from_columns(rows, cols))
    }

    /// The map as a chain map of underlying complexes on the common range.
    pub fn chain_map(&self) -> Result<GradedLinearMap, LieError> {
        let range = self.common_range();
        let mut matrices = BTreeMap::new();
        for n in range.0..=range.1 {
            matrices.insert(n, self.matrix(n)?);
        }
        Ok(GradedLinearMap::new(
            self.source.space().clone(),
            self.target.space().clone(),
            0,
            range,
            matrices,
            SignRule::Commutes,
        )?)
    }
}

fn free_map(images: &[TensorPoly], target_gens: usize) -> Option<Vec<usize>> {
    let mut seen = vec![false; target_gens];
    let mut out = Vec::with_capacity(images.len());
    for img in images {
        match img.terms() {
            [(w, c)] if w.len() == 1 && c.is_one() => {
                let t = w[0] as usize;
                if seen[t] {
                    return None;
                }
                seen[t] = true;
                out.push(t);
            }
            _ => return None,
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCheck {
    pub holds: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

/// Bracket pairs sampled per verification.
const BRACKET_SAMPLE: usize = 256;

/// Checks `f∘d = d∘f` on generators and bracket preservation on basis pairs
/// of low degree.
pub fn verify_morphism(f: &LieMorphism) -> Result<MorphismCheck, LieError> {
    let (src, tgt) = (&f.source, &f.target);
    let mut checked = 0;
    for i in 0..src.generators().len() {
        let deg = src.letter_degrees()[i];
        check_degree(deg, (i64::MIN, tgt.cutoff()))?;
        let fd = apply_homomorphism(src.d_of_generator(i).poly(), &f.images);
        let df = apply_derivation(&f.images[i], -1, tgt.d_images(), tgt.letter_degrees());
        checked += 1;
        if fd != df {
            return Ok(MorphismCheck {
                holds: false,
                checked,
                witness: Some(format!(
                    "generator {}: f(d) = {}, d(f) = {}",
                    src.generator_names()[i],
                    fd.display(tgt.generator_names()),
                    df.display(tgt.generator_names())
                )),
            });
        }
    }
    let top = f.common_range().1;
    let mut pairs = Vec::new();
    'outer: for p in 1..=top {
        for q in p..=top - p {
            for i in 0..src.dim(p)? {
                for j in 0..src.dim(q)? {
                    if pairs.len() >= BRACKET_SAMPLE {
                        break 'outer;
                    }
                    pairs.push((p, i, q, j));
                }
            }
        }
    }
    for (p, i, q, j) in pairs {
        let x = src.basis_element(p, i);
        let y = src.basis_element(q, j);
        let lhs = f.apply(&src.bracket(&x, &y)?)?;
        let rhs = tgt.bracket(&f.apply(&x)?, &f.apply(&y)?)?;
        checked += 1;
        if lhs != rhs {
            return Ok(MorphismCheck {
                holds: false,
                checked,
                witness: Some(format!(
                    "bracket [{}, {}] not preserved",
                    src.label(p, i),
                    src.label(q, j)
                )),
            });
        }
    }
    Ok(MorphismCheck {
        holds: true,
        checked,
        witness: None,
    })
}
