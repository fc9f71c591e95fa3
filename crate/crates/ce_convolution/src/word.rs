use smallvec::SmallVec;

/// A monomial in the graded symmetric algebra on `sL`: indices of
/// suspended basis elements in nondecreasing order, odd ones not repeated.
pub type Word = SmallVec<[u32; 8]>;

/// Sorts `seq` into normal form and returns the Koszul sign of the
/// permutation, or `None` when an odd factor repeats.
pub fn normalize(seq: &mut [u32], odd: &[bool]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..seq.len() {
        let mut j = i;
        while j > 0 && seq[j - 1] > seq[j] {
            if odd[seq[j - 1] as usize] && odd[seq[j] as usize] {
                sign = -sign;
            }
            seq.swap(j - 1, j);
            j -= 1;
        }
    }
    if seq.windows(2).any(|w| w[0] == w[1] && odd[w[0] as usize]) {
        None
    } else {
        Some(sign)
    }
}

/// Splittings of a normal-form word into two nonempty subwords, with the
/// Koszul sign of the unshuffle; positions are treated as distinct.
pub fn unshuffles(w: &[u32], degrees: &[i64]) -> Vec<(Word, Word, i32)> {
    let k = w.len();
    let mut out = Vec::new();
    if k < 2 {
        return out;
    }
    for mask in 1u32..((1u32 << k) - 1) {
        let mut left = Word::new();
        let mut right = Word::new();
        let mut odd_right = 0i64;
        let mut sign = 1;
        for (pos, &e) in w.iter().enumerate() {
            let deg = degrees[e as usize];
            if mask & (1 << pos) != 0 {
                if deg % 2 != 0 && odd_right % 2 != 0 {
                    sign = -sign;
                }
                left.push(e);
            } else {
                odd_right += deg.rem_euclid(2);
                right.push(e);
            }
        }
        out.push((left, right, sign));
    }
    out
}
