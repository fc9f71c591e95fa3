//! Fraction-free sparse elimination.
//!
//! Rows are scaled to primitive integer rows and reduced with integer row
//! operations `r ← (a/g)·r − (b/g)·p`, dividing by the row content after each
//! step. Work starts in checked `i128` and restarts in `BigInt` on overflow.
//! Independent blocks (connected components of the row/column incidence
//! graph) are reduced separately, in parallel; the reduced row echelon form is
//! unique, so the split never changes results.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::rational::Rational;
use crate::sparse::{SparseMatrix, SparseVec};

trait Ring: Clone + PartialEq + Send + Sync + Sized {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn cmul(&self, o: &Self) -> Option<Self>;
    fn csub(&self, o: &Self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn is_negative(&self) -> bool;
    fn negate(&self) -> Self;
    fn is_unit(&self) -> bool;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

/// Magnitudes stay below this so negation can never overflow.
const I128_LIMIT: u128 = 1 << 126;

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o).filter(|v| v.unsigned_abs() < I128_LIMIT)
    }
    fn csub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o).filter(|v| v.unsigned_abs() < I128_LIMIT)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128().filter(|v| v.unsigned_abs() < I128_LIMIT)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn csub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type IntRow<T> = Vec<(usize, T)>;

struct Overflow;

/// Divides by the content and makes the leading entry positive.
fn make_primitive<T: Ring>(row: &mut IntRow<T>) {
    if row.is_empty() {
        return;
    }
    let mut g = T::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_unit() {
            break;
        }
    }
    let flip = row[0].1.is_negative();
    if !g.is_unit() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
    if flip {
        for (_, v) in row.iter_mut() {
            *v = v.negate();
        }
    }
}

fn entry<T: Ring>(row: &IntRow<T>, col: usize) -> Option<&T> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// Eliminates column `col` from `r` using pivot row `p` (nonzero at `col`).
fn eliminate<T: Ring>(r: &IntRow<T>, p: &IntRow<T>, col: usize) -> Result<IntRow<T>, Overflow> {
    let a = entry(p, col).expect("pivot entry");
    let b = entry(r, col).expect("row entry");
    let g = a.gcd(b);
    let (a, b) = (a.div_exact(&g), b.div_exact(&g));
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        if j >= p.len() || (i < r.len() && r[i].0 < p[j].0) {
            out.push((r[i].0, r[i].1.cmul(&a).ok_or(Overflow)?));
            i += 1;
        } else if i >= r.len() || p[j].0 < r[i].0 {
            out.push((p[j].0, T::zero().csub(&p[j].1.cmul(&b).ok_or(Overflow)?).ok_or(Overflow)?));
            j += 1;
        } else {
            let v = r[i]
                .1
                .cmul(&a)
                .ok_or(Overflow)?
                .csub(&p[j].1.cmul(&b).ok_or(Overflow)?)
                .ok_or(Overflow)?;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(&mut out);
    Ok(out)
}

/// Integer echelon form keyed by pivot column.
fn echelon<T: Ring>(rows: &[IntRow<T>]) -> Result<BTreeMap<usize, IntRow<T>>, Overflow> {
    let mut pivots: BTreeMap<usize, IntRow<T>> = BTreeMap::new();
    for row in rows {
        let mut r = row.clone();
        while let Some(&(lead, _)) = r.first() {
            match pivots.get(&lead) {
                Some(p) => r = eliminate(&r, p, lead)?,
                None => {
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    Ok(pivots)
}

/// Back substitution: every pivot row ends up zero in all other pivot columns.
fn reduce_fully<T: Ring>(pivots: &mut BTreeMap<usize, IntRow<T>>) -> Result<(), Overflow> {
    let cols: Vec<usize> = pivots.keys().rev().copied().collect();
    for &c in &cols {
        let mut r = pivots.remove(&c).expect("pivot");
        let mut k = 1;
        while k < r.len() {
            let col = r[k].0;
            if let Some(p) = pivots.get(&col) {
                r = eliminate(&r, p, col)?;
                // entries before `col` are unchanged; resume just after it
                k = r.partition_point(|e| e.0 <= col);
            } else {
                k += 1;
            }
        }
        pivots.insert(c, r);
    }
    Ok(())
}

fn to_int_row<T: Ring>(row: &SparseVec, local: &dyn Fn(usize) -> usize) -> Option<IntRow<T>> {
    let mut lcm = BigInt::one();
    for (_, c) in row.iter() {
        lcm = lcm.lcm(&c.denominator());
    }
    let mut big: Vec<(usize, BigInt)> = row
        .iter()
        .map(|(i, c)| (local(i), c.numerator() * (&lcm / c.denominator())))
        .collect();
    big.sort_by_key(|e| e.0);
    let mut out: IntRow<T> = Vec::with_capacity(big.len());
    for (i, v) in &big {
        out.push((*i, T::from_big(v)?));
    }
    make_primitive(&mut out);
    Some(out)
}

/// A block of the incidence graph: its global columns (ascending) and rows.
struct Block {
    cols: Vec<usize>,
    rows: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn blocks(rows: &[SparseVec], ncols: usize) -> Vec<Block> {
    let mut parent: Vec<usize> = (0..ncols).collect();
    for r in rows {
        let mut it = r.iter().map(|(i, _)| i);
        if let Some(first) = it.next() {
            for j in it {
                let a = find(&mut parent, first);
                let b = find(&mut parent, j);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Block> = BTreeMap::new();
    for c in 0..ncols {
        let root = find(&mut parent, c);
        by_root
            .entry(root)
            .or_insert_with(|| Block {
                cols: Vec::new(),
                rows: Vec::new(),
            })
            .cols
            .push(c);
    }
    for (k, r) in rows.iter().enumerate() {
        if let Some((first, _)) = r.leading() {
            let root = find(&mut parent, first);
            by_root.get_mut(&root).expect("root").rows.push(k);
        }
    }
    by_root.into_values().collect()
}

/// Reduced rows of one block, as rationals with pivot entry 1, global columns.
fn block_rref(rows: &[SparseVec], block: &Block, full: bool) -> Vec<(usize, SparseVec)> {
    let local_of = |g: usize| block.cols.binary_search(&g).expect("column in block");
    let mut picked: Vec<&SparseVec> = block.rows.iter().map(|&k| &rows[k]).collect();
    picked.sort_by_key(|r| r.nnz());
    let run_small = || -> Option<Vec<(usize, SparseVec)>> {
        let int_rows: Option<Vec<IntRow<i128>>> =
            picked.iter().map(|r| to_int_row::<i128>(r, &local_of)).collect();
        let mut piv = echelon(&int_rows?).ok()?;
        if full {
            reduce_fully(&mut piv).ok()?;
        }
        Some(finish(piv, &block.cols))
    };
    if let Some(out) = run_small() {
        return out;
    }
    let int_rows: Vec<IntRow<BigInt>> = picked
        .iter()
        .map(|r| to_int_row::<BigInt>(r, &local_of).expect("bigint conversion"))
        .collect();
    let mut piv = echelon(&int_rows).unwrap_or_else(|_| unreachable!());
    if full {
        reduce_fully(&mut piv).unwrap_or_else(|_| unreachable!());
    }
    finish(piv, &block.cols)
}

fn finish<T: Ring>(piv: BTreeMap<usize, IntRow<T>>, cols: &[usize]) -> Vec<(usize, SparseVec)> {
    piv.into_iter()
        .map(|(c, row)| {
            let lead = Rational::from(row[0].1.to_big());
            let v: Vec<(usize, Rational)> = row
                .iter()
                .map(|(i, x)| (cols[*i], Rational::from(x.to_big()) / &lead))
                .collect();
            (cols[c], SparseVec::from_sorted_unchecked(v))
        })
        .collect()
}

/// Reduced row echelon form of a row set over `ncols` unknowns.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    ncols: usize,
    /// (pivot column, reduced row with entry 1 at the pivot), ascending by pivot.
    pivots: Vec<(usize, SparseVec)>,
    reduced: bool,
}

impl RowEchelon {
    fn compute(rows: &[SparseVec], ncols: usize, full: bool) -> Self {
        let bl = blocks(rows, ncols);
        let parts: Vec<Vec<(usize, SparseVec)>> = bl
            .par_iter()
            .filter(|b| !b.rows.is_empty())
            .map(|b| block_rref(rows, b, full))
            .collect();
        let mut pivots: Vec<(usize, SparseVec)> = parts.into_iter().flatten().collect();
        pivots.sort_by_key(|p| p.0);
        RowEchelon {
            ncols,
            pivots,
            reduced: full,
        }
    }

    /// Fully reduced form (pivot columns cleared above and below).
    pub fn reduced(rows: &[SparseVec], ncols: usize) -> Self {
        Self::compute(rows, ncols, true)
    }

    /// Echelon form only; enough for rank.
    pub fn echelon(rows: &[SparseVec], ncols: usize) -> Self {
        Self::compute(rows, ncols, false)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|p| p.0).collect()
    }

    pub fn rows(&self) -> &[(usize, SparseVec)] {
        &self.pivots
    }

    /// Null space basis: one vector per free column, ascending, entry 1 there.
    pub fn kernel(&self) -> Vec<SparseVec> {
        assert!(self.reduced, "kernel needs the fully reduced form");
        let mut is_pivot = vec![false; self.ncols];
        for (c, _) in &self.pivots {
            is_pivot[*c] = true;
        }
        let mut per_free: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for f in (0..self.ncols).filter(|&f| !is_pivot[f]) {
            per_free.insert(f, vec![(f, Rational::one())]);
        }
        for (c, row) in &self.pivots {
            for (j, v) in row.iter() {
                if j != *c {
                    per_free.get_mut(&j).expect("free column").push((*c, -v));
                }
            }
        }
        per_free
            .into_values()
            .map(SparseVec::from_entries)
            .collect()
    }
}

/// For rows taken in the given order, whether each is independent of the
/// rows before it.
pub fn independent_in_order(rows: &[SparseVec], ncols: usize) -> Vec<bool> {
    let bl = blocks(rows, ncols);
    let parts: Vec<Vec<(usize, bool)>> = bl
        .par_iter()
        .filter(|b| !b.rows.is_empty())
        .map(|b| block_flags(rows, b))
        .collect();
    let mut flags = vec![false; rows.len()];
    for (k, f) in parts.into_iter().flatten() {
        flags[k] = f;
    }
    flags
}

fn block_flags(rows: &[SparseVec], block: &Block) -> Vec<(usize, bool)> {
    let local_of = |g: usize| block.cols.binary_search(&g).expect("column in block");
    fn run<T: Ring>(
        rows: &[SparseVec],
        block: &Block,
        local_of: &dyn Fn(usize) -> usize,
    ) -> Option<Vec<(usize, bool)>> {
        let mut pivots: BTreeMap<usize, IntRow<T>> = BTreeMap::new();
        let mut out = Vec::with_capacity(block.rows.len());
        for &k in &block.rows {
            let mut r = to_int_row::<T>(&rows[k], local_of)?;
            let mut independent = false;
            while let Some(&(lead, _)) = r.first() {
                match pivots.get(&lead) {
                    Some(p) => r = eliminate(&r, p, lead).ok()?,
                    None => {
                        pivots.insert(lead, r);
                        independent = true;
                        break;
                    }
                }
            }
            out.push((k, independent));
        }
        Some(out)
    }
    run::<i128>(rows, block, &local_of)
        .or_else(|| run::<BigInt>(rows, block, &local_of))
        .expect("bigint elimination cannot overflow")
}

/// Exact rank.
pub fn rank(m: &SparseMatrix) -> usize {
    RowEchelon::echelon(&m.row_vectors(), m.cols()).rank()
}

/// Rank of the span of a list of vectors in a space of dimension `dim`.
pub fn span_rank(vectors: &[SparseVec], dim: usize) -> usize {
    RowEchelon::echelon(vectors, dim).rank()
}

/// Null space basis (ascending by free column; entry 1 at the free column).
pub fn kernel(m: &SparseMatrix) -> Vec<SparseVec> {
    RowEchelon::reduced(&m.row_vectors(), m.cols()).kernel()
}

/// Null space basis together with, for each vector, its free column: the
/// vector is 1 there and every other basis vector is 0 there.
pub fn kernel_with_free_columns(m: &SparseMatrix) -> (Vec<usize>, Vec<SparseVec>) {
    let ech = RowEchelon::reduced(&m.row_vectors(), m.cols());
    let mut free = vec![true; m.cols()];
    for c in ech.pivot_columns() {
        free[c] = false;
    }
    let cols = (0..m.cols()).filter(|&c| free[c]).collect();
    (cols, ech.kernel())
}

/// Solves `m · x = b_k` for every column `b_k` of `rhs`; `None` when some
/// right-hand side is outside the column space. Free unknowns are set to 0.
pub fn solve(m: &SparseMatrix, rhs: &SparseMatrix) -> Option<Vec<SparseVec>> {
    assert_eq!(m.rows(), rhs.rows());
    let aug = m.hstack(rhs);
    let ech = RowEchelon::reduced(&aug.row_vectors(), aug.cols());
    let n = m.cols();
    if ech.pivots.iter().any(|(c, _)| *c >= n) {
        return None;
    }
    let mut sol: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rhs.cols()];
    for (c, row) in &ech.pivots {
        for (j, v) in row.iter() {
            if j >= n {
                sol[j - n].push((*c, v.clone()));
            }
        }
    }
    Some(sol.into_iter().map(SparseVec::from_entries).collect())
}

/// Dense null-space basis of a dense matrix.
pub fn kernel_basis(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let m = SparseMatrix::from_dense(rows);
    let n = m.cols();
    kernel(&m).into_iter().map(|v| v.to_dense(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn zero_one_by_one() {
        assert_eq!(kernel_basis(&[vec![q(0)]]), vec![vec![q(1)]]);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(kernel_basis(&[vec![q(1), q(0)], vec![q(0), q(1)]]).is_empty());
    }

    #[test]
    fn rank_one_example() {
        let k = kernel_basis(&[vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert_eq!(k, vec![vec![q(-2), q(1)]]);
    }

    #[test]
    fn empty_input() {
        assert!(kernel_basis(&[]).is_empty());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = Rational::from_bigints(BigInt::from(10).pow(40), BigInt::one());
        let m = SparseMatrix::from_dense(&[
            vec![big.clone(), q(1), q(0)],
            vec![q(1), big.clone(), q(1)],
            vec![q(3), q(0), big.clone()],
        ]);
        assert_eq!(rank(&m), 3);
        assert!(kernel(&m).is_empty());
    }

    #[test]
    fn solve_recovers_coefficients() {
        let m = SparseMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1], vec![0, 2]]);
        let b = SparseMatrix::from_i64_rows(&[vec![3], vec![5], vec![4]]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(x[0], SparseVec::from_entries([(0, q(3)), (1, q(2))]));
        let bad = SparseMatrix::from_i64_rows(&[vec![1], vec![0], vec![0]]);
        assert!(solve(&m, &bad).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
        })
    }

    fn dense_rank(rows: &[Vec<i64>]) -> usize {
        // textbook fraction Gaussian elimination as an independent oracle
        let mut a: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        let (nr, nc) = (a.len(), a[0].len());
        let mut rank = 0;
        for col in 0..nc {
            if let Some(p) = (rank..nr).find(|&i| !a[i][col].is_zero()) {
                a.swap(rank, p);
                for i in 0..nr {
                    if i != rank && !a[i][col].is_zero() {
                        let f = &a[i][col] / &a[rank][col];
                        for j in 0..nc {
                            let t = &a[rank][j] * &f;
                            a[i][j] -= t;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in small_matrix()) {
            let m = SparseMatrix::from_i64_rows(&rows);
            let k = kernel(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            prop_assert_eq!(rank(&m), dense_rank(&rows));
            for v in &k {
                prop_assert!(m.apply(v).is_zero());
            }
        }

        #[test]
        fn row_order_does_not_matter(rows in small_matrix()) {
            let m = SparseMatrix::from_i64_rows(&rows);
            let mut rev = rows.clone();
            rev.reverse();
            let m2 = SparseMatrix::from_i64_rows(&rev);
            prop_assert_eq!(kernel(&m), kernel(&m2));
        }
    }
}
