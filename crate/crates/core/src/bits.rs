//! Fixed-length packed bit vectors and GF(2) row reduction.

use std::fmt;

const WORD: usize = 64;

/// A fixed-length vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_count(&self, other: &BitVec) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + t)
            })
        })
    }

    /// Low word, for callers that know `len <= 64`.
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row space of a list of GF(2) vectors, kept in echelon form together with
/// the combination of original rows that produced each reduced row.
#[derive(Clone, Debug)]
pub struct RowSpace {
    width: usize,
    rows: usize,
    // (pivot column, reduced row, combination of input rows)
    basis: Vec<(usize, BitVec, BitVec)>,
}

impl RowSpace {
    pub fn new(width: usize, rows: &[BitVec]) -> Self {
        let mut space = Self {
            width,
            rows: rows.len(),
            basis: Vec::new(),
        };
        for (k, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), width);
            let mut r = row.clone();
            let mut combo = BitVec::from_indices(rows.len(), [k]);
            space.reduce(&mut r, &mut combo);
            if let Some(p) = r.first_one() {
                // keep the basis fully reduced on pivot columns
                for (_, b, c) in space.basis.iter_mut() {
                    if b.get(p) {
                        b.xor_with(&r);
                        c.xor_with(&combo);
                    }
                }
                space.basis.push((p, r, combo));
            }
        }
        space
    }

    fn reduce(&self, v: &mut BitVec, combo: &mut BitVec) {
        for (p, b, c) in &self.basis {
            if v.get(*p) {
                v.xor_with(b);
                combo.xor_with(c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Returns a set of input rows summing to `target`, if one exists.
    pub fn solve(&self, target: &BitVec) -> Option<BitVec> {
        let mut v = target.clone();
        let mut combo = BitVec::zeros(self.rows);
        self.reduce(&mut v, &mut combo);
        v.is_zero().then_some(combo)
    }

    pub fn contains(&self, target: &BitVec) -> bool {
        self.solve(target).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_ones_crosses_word_boundary() {
        let v = BitVec::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(v.count_ones(), 4);
        assert_eq!(v.first_one(), Some(0));
    }

    #[test]
    fn solve_finds_combination() {
        let rows = vec![
            BitVec::from_indices(4, [0, 1]),
            BitVec::from_indices(4, [1, 2]),
            BitVec::from_indices(4, [2, 3]),
        ];
        let space = RowSpace::new(4, &rows);
        assert_eq!(space.rank(), 3);
        let combo = space.solve(&BitVec::from_indices(4, [0, 3])).unwrap();
        assert_eq!(combo.iter_ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(space.solve(&BitVec::from_indices(4, [0])).is_none());
    }

    #[test]
    fn dependent_rows_do_not_raise_rank() {
        let rows = vec![
            BitVec::from_indices(3, [0, 1]),
            BitVec::from_indices(3, [1, 2]),
            BitVec::from_indices(3, [0, 2]),
        ];
        let space = RowSpace::new(3, &rows);
        assert_eq!(space.rank(), 2);
        let combo = space.solve(&BitVec::from_indices(3, [0, 2])).unwrap();
        let mut sum = BitVec::zeros(3);
        for k in combo.iter_ones() {
            sum.xor_with(&rows[k]);
        }
        assert_eq!(sum, BitVec::from_indices(3, [0, 2]));
    }
}
