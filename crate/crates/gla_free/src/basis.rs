//! Per-degree bases of a free graded Lie algebra inside the tensor algebra.
//!
//! Basis elements are the bracketed Lyndon words `P_w` (standard
//! factorisation) together with the squares `[P_u, P_u]` of odd-degree Lyndon
//! words. Each element has a distinct smallest word ("lead"), which makes the
//! change to coordinates a triangular solve. Dimensions are checked against
//! the Poincaré–Birkhoff–Witt count at construction.

use std::collections::{BTreeMap, HashMap};

use exactlin::{Rational, SparseVec};
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::LieError;
use crate::tensor::{TensorPoly, Word};

#[derive(Clone, Debug)]
pub(crate) struct BasisElement {
    pub label: String,
    pub poly: TensorPoly,
    pub lead: Word,
    pub lead_coeff: Rational,
    /// Number of letters, i.e. bracket length.
    pub length: usize,
}

#[derive(Debug, Default)]
pub(crate) struct DegreeBasis {
    /// Sorted by label.
    pub elements: Vec<BasisElement>,
    lead_pos: HashMap<Word, usize>,
    /// Element indices sorted by lead word.
    order: Vec<usize>,
    rank: Vec<usize>,
    /// Per element: `(rank, coefficient)` at the leads of later elements.
    restricted: Vec<Vec<(usize, Rational)>>,
}

impl DegreeBasis {
    fn new(mut elements: Vec<BasisElement>) -> Self {
        elements.sort_by(|a, b| a.label.cmp(&b.label));
        let lead_pos: HashMap<Word, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.lead.clone(), i))
            .collect();
        assert_eq!(lead_pos.len(), elements.len(), "lead words must be distinct");
        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by(|&a, &b| elements[a].lead.cmp(&elements[b].lead));
        let mut rank = vec![0; elements.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let restricted = elements
            .par_iter()
            .enumerate()
            .map(|(j, e)| {
                let mut row: Vec<(usize, Rational)> = e
                    .poly
                    .terms()
                    .iter()
                    .filter_map(|(w, c)| match lead_pos.get(w) {
                        Some(&k) if k != j => Some((rank[k], c.clone())),
                        _ => None,
                    })
                    .collect();
                row.sort_by_key(|x| x.0);
                debug_assert!(row.iter().all(|(r, _)| *r > rank[j]));
                row
            })
            .collect();
        DegreeBasis {
            elements,
            lead_pos,
            order,
            rank,
            restricted,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn collector(&self) -> LeadCollector<'_> {
        LeadCollector {
            basis: self,
            acc: HashMap::new(),
        }
    }

    /// Expansion of a coordinate vector in the tensor algebra.
    pub fn expand(&self, coords: &SparseVec) -> TensorPoly {
        let mut acc = crate::tensor::Accumulator::new();
        for (i, c) in coords.iter() {
            acc.add_poly(&self.elements[i].poly, c);
        }
        acc.finish()
    }
}

/// Gathers the coefficients of an element at the lead words of a degree's
/// basis, then solves for its coordinates. Only meaningful for elements known
/// to lie in the Lie subalgebra; other words are ignored.
pub struct LeadCollector<'a> {
    basis: &'a DegreeBasis,
    acc: HashMap<usize, Rational>,
}

impl LeadCollector<'_> {
    pub fn add(&mut self, w: &[u8], c: &Rational) {
        if c.is_zero() {
            return;
        }
        if let Some(&k) = self.basis.lead_pos.get(w) {
            *self.acc.entry(self.basis.rank[k]).or_default() += c;
        }
    }

    pub fn add_poly(&mut self, p: &TensorPoly, c: &Rational) {
        for (w, v) in p.terms() {
            self.add(w, &(v * c));
        }
    }

    pub fn finish(self) -> SparseVec {
        let basis = self.basis;
        let mut pending: BTreeMap<usize, Rational> =
            self.acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = Vec::new();
        while let Some((r, v)) = pending.pop_first() {
            if v.is_zero() {
                continue;
            }
            let k = basis.order[r];
            let ck = &v / &basis.elements[k].lead_coeff;
            for (r2, m) in &basis.restricted[k] {
                let e = pending.entry(*r2).or_default();
                *e -= &ck * m;
            }
            out.push((k, ck));
        }
        SparseVec::from_entries(out)
    }
}

struct Lyndon {
    word: Word,
    degree: i64,
    right: Option<usize>,
    left: Option<usize>,
    label: String,
    /// Position of `P_w` in its degree's element list before sorting.
    slot: usize,
}

/// Builds the bases of degrees `0..=cutoff`.
pub(crate) fn build_bases(
    names: &[String],
    letter_degrees: &[i64],
    cutoff: i64,
) -> Result<Vec<DegreeBasis>, LieError> {
    let top = cutoff.max(0) as usize;
    let expected = pbw_dimensions(letter_degrees, top)?;
    let mut lyndon: Vec<Lyndon> = Vec::new();
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    // unsorted element lists per degree, to look up factor polynomials
    let mut raw: Vec<Vec<BasisElement>> = vec![Vec::new(); top + 1];
    for n in 1..=top {
        let mut fresh: Vec<Lyndon> = Vec::new();
        for (l, &d) in letter_degrees.iter().enumerate() {
            if d as usize == n {
                fresh.push(Lyndon {
                    word: SmallVec::from_slice(&[l as u8]),
                    degree: d,
                    right: None,
                    left: None,
                    label: names[l].clone(),
                    slot: 0,
                });
            }
        }
        for p in 1..n {
            for &u in &by_degree[p] {
                for &v in &by_degree[n - p] {
                    let (lu, lv) = (&lyndon[u], &lyndon[v]);
                    if lu.word >= lv.word {
                        continue;
                    }
                    if let Some(r) = lu.right {
                        if lyndon[r].word < lv.word {
                            continue;
                        }
                    }
                    let mut word = lu.word.clone();
                    word.extend_from_slice(&lv.word);
                    fresh.push(Lyndon {
                        word,
                        degree: n as i64,
                        right: Some(v),
                        left: Some(u),
                        label: format!("[{},{}]", lu.label, lv.label),
                        slot: 0,
                    });
                }
            }
        }
        let factor = |i: usize| &raw[lyndon[i].degree as usize][lyndon[i].slot];
        let mut elems: Vec<BasisElement> = fresh
            .par_iter()
            .map(|ly| {
                let poly = match (ly.left, ly.right) {
                    (Some(u), Some(v)) => TensorPoly::commutator(
                        &factor(u).poly,
                        lyndon[u].degree,
                        &factor(v).poly,
                        lyndon[v].degree,
                    ),
                    _ => TensorPoly::letter(ly.word[0]),
                };
                BasisElement {
                    label: ly.label.clone(),
                    poly,
                    lead: ly.word.clone(),
                    lead_coeff: Rational::one(),
                    length: ly.word.len(),
                }
            })
            .collect();
        if n % 2 == 0 && (n / 2) % 2 == 1 {
            let squares: Vec<BasisElement> = by_degree[n / 2]
                .par_iter()
                .map(|&u| {
                    let pu = &factor(u).poly;
                    let mut lead = lyndon[u].word.clone();
                    lead.extend_from_slice(&lyndon[u].word);
                    BasisElement {
                        label: format!("[{},{}]", lyndon[u].label, lyndon[u].label),
                        poly: TensorPoly::commutator(pu, lyndon[u].degree, pu, lyndon[u].degree),
                        length: lead.len(),
                        lead,
                        lead_coeff: Rational::from_integer(2),
                    }
                })
                .collect();
            elems.extend(squares);
        }
        for e in &elems {
            match e.poly.leading() {
                Some((w, c)) if *w == e.lead && *c == e.lead_coeff => {}
                _ => {
                    return Err(LieError::InvalidModel(format!(
                        "internal: basis element {} has unexpected leading term",
                        e.label
                    )))
                }
            }
        }
        if elems.len() != expected[n] {
            return Err(LieError::InvalidModel(format!(
                "internal: degree {n} basis has {} elements, expected {}",
                elems.len(),
                expected[n]
            )));
        }
        for (slot, mut ly) in fresh.into_iter().enumerate() {
            ly.slot = slot;
            by_degree[n].push(lyndon.len());
            lyndon.push(ly);
        }
        raw[n] = elems;
    }
    Ok(raw.into_iter().map(DegreeBasis::new).collect())
}

/// Dimensions of the free graded Lie algebra on letters of the given degrees,
/// read off from `U(L) = T(V)` and the graded PBW theorem.
pub fn pbw_dimensions(letter_degrees: &[i64], top: usize) -> Result<Vec<usize>, LieError> {
    let overflow = || LieError::InvalidModel("dimension count overflows".into());
    let mut words = vec![0i128; top + 1];
    words[0] = 1;
    for n in 1..=top {
        for &d in letter_degrees {
            let d = d as usize;
            if d <= n {
                words[n] = words[n].checked_add(words[n - d]).ok_or_else(overflow)?;
            }
        }
    }
    let mut series = vec![0i128; top + 1];
    series[0] = 1;
    let mut dims = vec![0usize; top + 1];
    for m in 1..=top {
        let l = words[m] - series[m];
        if l < 0 {
            return Err(overflow());
        }
        dims[m] = l as usize;
        for _ in 0..l {
            if m % 2 == 1 {
                // multiply by (1 + t^m)
                for k in (m..=top).rev() {
                    series[k] = series[k].checked_add(series[k - m]).ok_or_else(overflow)?;
                }
            } else {
                // multiply by 1/(1 − t^m)
                for k in m..=top {
                    series[k] = series[k].checked_add(series[k - m]).ok_or_else(overflow)?;
                }
            }
        }
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pbw_counts() {
        // classical free Lie algebra on two even generators of degree 2:
        // dims in degree 2k follow the necklace numbers 2, 1, 2, 3, 6
        let d = pbw_dimensions(&[2, 2], 10).unwrap();
        assert_eq!(d, vec![0, 0, 2, 0, 1, 0, 2, 0, 3, 0, 6]);
        // one odd generator: a and [a,a] only
        let d = pbw_dimensions(&[1], 6).unwrap();
        assert_eq!(d, vec![0, 1, 1, 0, 0, 0, 0]);
        // one even generator: abelian
        assert_eq!(pbw_dimensions(&[2], 6).unwrap(), vec![0, 0, 1, 0, 0, 0, 0]);
    }
}
