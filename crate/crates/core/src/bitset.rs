//! Packed binary matrices.
//!
//! `ParamSet` is the workhorse behind the mask matrix and every set of
//! parameter positions (active, pruned, grown, sampled-row expansions). All
//! set algebra runs on 64-bit words so that union, difference, intersection
//! and cardinality are single logical ops plus popcounts.

const WORD_BITS: usize = 64;

/// A set of (row, col) positions over a fixed `rows x cols` grid, one bit per
/// position. Rows are padded to whole words; padding bits are always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct ParamSet {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl ParamSet {
    pub fn new(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "ParamSet dimensions must be nonzero");
        let words_per_row = cols.div_ceil(WORD_BITS);
        ParamSet {
            rows,
            cols,
            words_per_row,
            words: vec![0u64; rows * words_per_row],
        }
    }

    /// All positions of the given rows (used to expand a sampled row set to
    /// parameter positions).
    pub fn from_full_rows<I: IntoIterator<Item = usize>>(
        rows: usize,
        cols: usize,
        full_rows: I,
    ) -> Self {
        let mut set = ParamSet::new(rows, cols);
        for r in full_rows {
            set.set_row_full(r);
        }
        set
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn same_shape(&self, other: &ParamSet) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    #[inline]
    fn word_index(&self, row: usize, col: usize) -> (usize, u64) {
        debug_assert!(row < self.rows && col < self.cols);
        let idx = row * self.words_per_row + col / WORD_BITS;
        let bit = 1u64 << (col % WORD_BITS);
        (idx, bit)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        let (idx, bit) = self.word_index(row, col);
        self.words[idx] & bit != 0
    }

    /// Sets the bit; returns true if it was previously clear.
    #[inline]
    pub fn insert(&mut self, row: usize, col: usize) -> bool {
        let (idx, bit) = self.word_index(row, col);
        let was_clear = self.words[idx] & bit == 0;
        self.words[idx] |= bit;
        was_clear
    }

    /// Clears the bit; returns true if it was previously set.
    #[inline]
    pub fn remove(&mut self, row: usize, col: usize) -> bool {
        let (idx, bit) = self.word_index(row, col);
        let was_set = self.words[idx] & bit != 0;
        self.words[idx] &= !bit;
        was_set
    }

    pub fn set_row_full(&mut self, row: usize) {
        assert!(row < self.rows);
        let start = row * self.words_per_row;
        for w in 0..self.words_per_row {
            self.words[start + w] = self.row_word_mask(w);
        }
    }

    /// Valid-bit mask for word `w` of a row (handles the padded tail word).
    #[inline]
    fn row_word_mask(&self, w: usize) -> u64 {
        let bits_before = w * WORD_BITS;
        let remaining = self.cols - bits_before;
        if remaining >= WORD_BITS {
            u64::MAX
        } else {
            (1u64 << remaining) - 1
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_count_ones(&self, row: usize) -> usize {
        assert!(row < self.rows);
        let start = row * self.words_per_row;
        self.words[start..start + self.words_per_row]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Popcount over a row range `[begin, end)`.
    pub fn count_ones_in_rows(&self, begin: usize, end: usize) -> usize {
        assert!(begin <= end && end <= self.rows);
        let lo = begin * self.words_per_row;
        let hi = end * self.words_per_row;
        self.words[lo..hi].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    pub fn union_with(&mut self, other: &ParamSet) {
        assert!(self.same_shape(other), "ParamSet shape mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &ParamSet) {
        assert!(self.same_shape(other), "ParamSet shape mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersect_with(&mut self, other: &ParamSet) {
        assert!(self.same_shape(other), "ParamSet shape mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_disjoint(&self, other: &ParamSet) -> bool {
        assert!(self.same_shape(other), "ParamSet shape mismatch");
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset_of(&self, other: &ParamSet) -> bool {
        assert!(self.same_shape(other), "ParamSet shape mismatch");
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// `self ⊆ a ∪ b` without materializing the union.
    pub fn is_subset_of_union(&self, a: &ParamSet, b: &ParamSet) -> bool {
        assert!(self.same_shape(a) && self.same_shape(b), "ParamSet shape mismatch");
        self.words
            .iter()
            .zip(a.words.iter().zip(&b.words))
            .all(|(s, (x, y))| s & !(x | y) == 0)
    }

    /// Iterates set positions in row-major order.
    pub fn iter_ones(&self) -> OnesIter<'_> {
        OnesIter {
            set: self,
            next_word: 0,
            current: 0,
            current_word: 0,
        }
    }

    /// Raw words in row-major, row-padded order (checkpoint serialization).
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    /// Rebuilds a set from raw words; rejects set padding bits.
    pub fn from_words(rows: usize, cols: usize, words: Vec<u64>) -> Option<Self> {
        let words_per_row = cols.div_ceil(WORD_BITS);
        if words.len() != rows * words_per_row || rows == 0 || cols == 0 {
            return None;
        }
        let set = ParamSet {
            rows,
            cols,
            words_per_row,
            words,
        };
        for r in 0..rows {
            for w in 0..words_per_row {
                let word = set.words[r * words_per_row + w];
                if word & !set.row_word_mask(w) != 0 {
                    return None;
                }
            }
        }
        Some(set)
    }
}

impl std::fmt::Debug for ParamSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ParamSet({}x{}, {} ones)",
            self.rows,
            self.cols,
            self.count_ones()
        )
    }
}

pub struct OnesIter<'a> {
    set: &'a ParamSet,
    /// Index of the next word to load.
    next_word: usize,
    /// Remaining bits of the loaded word.
    current: u64,
    /// Index of the loaded word.
    current_word: usize,
}

impl<'a> Iterator for OnesIter<'a> {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<(usize, usize)> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                let row = self.current_word / self.set.words_per_row;
                let col = (self.current_word % self.set.words_per_row) * WORD_BITS + bit;
                return Some((row, col));
            }
            if self.next_word >= self.set.words.len() {
                return None;
            }
            self.current_word = self.next_word;
            self.current = self.set.words[self.next_word];
            self.next_word += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_remove_get() {
        let mut s = ParamSet::new(3, 70);
        assert!(!s.get(2, 69));
        assert!(s.insert(2, 69));
        assert!(!s.insert(2, 69));
        assert!(s.get(2, 69));
        assert_eq!(s.count_ones(), 1);
        assert!(s.remove(2, 69));
        assert!(!s.remove(2, 69));
        assert!(s.is_empty());
    }

    #[test]
    fn iter_ones_row_major() {
        let mut s = ParamSet::new(2, 100);
        s.insert(1, 3);
        s.insert(0, 99);
        s.insert(0, 0);
        s.insert(1, 64);
        let ones: Vec<_> = s.iter_ones().collect();
        assert_eq!(ones, vec![(0, 0), (0, 99), (1, 3), (1, 64)]);
    }

    #[test]
    fn full_rows_and_row_counts() {
        let s = ParamSet::from_full_rows(4, 65, [1, 3]);
        assert_eq!(s.count_ones(), 130);
        assert_eq!(s.row_count_ones(0), 0);
        assert_eq!(s.row_count_ones(1), 65);
        assert_eq!(s.count_ones_in_rows(0, 2), 65);
        // Padding bits of the full rows must stay clear.
        assert_eq!(
            ParamSet::from_words(4, 65, s.words().to_vec()).map(|p| p.count_ones()),
            Some(130)
        );
    }

    #[test]
    fn from_words_rejects_padding() {
        let mut words = vec![0u64; 2 * 2];
        words[1] = 1u64 << 2; // col 66 of a 65-wide row: padding
        assert!(ParamSet::from_words(2, 65, words).is_none());
    }

    /// Model-based check of the packed set algebra against Vec<bool>.
    fn naive(bits: &[bool], rows: usize, cols: usize) -> ParamSet {
        let mut s = ParamSet::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if bits[r * cols + c] {
                    s.insert(r, c);
                }
            }
        }
        s
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn set_algebra_matches_per_bit_oracle(
            rows in 1usize..64,
            cols in 1usize..64,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a_bits: Vec<bool> = (0..rows * cols).map(|_| rng.gen_bool(0.4)).collect();
            let b_bits: Vec<bool> = (0..rows * cols).map(|_| rng.gen_bool(0.4)).collect();
            let a = naive(&a_bits, rows, cols);
            let b = naive(&b_bits, rows, cols);

            let card: usize = a_bits.iter().filter(|&&x| x).count();
            prop_assert_eq!(a.count_ones(), card);

            let mut union = a.clone();
            union.union_with(&b);
            let expect_union = a_bits.iter().zip(&b_bits).filter(|(x, y)| **x || **y).count();
            prop_assert_eq!(union.count_ones(), expect_union);

            let mut diff = a.clone();
            diff.difference_with(&b);
            let expect_diff = a_bits.iter().zip(&b_bits).filter(|(x, y)| **x && !**y).count();
            prop_assert_eq!(diff.count_ones(), expect_diff);

            let mut inter = a.clone();
            inter.intersect_with(&b);
            let expect_inter = a_bits.iter().zip(&b_bits).filter(|(x, y)| **x && **y).count();
            prop_assert_eq!(inter.count_ones(), expect_inter);

            prop_assert!(diff.is_subset_of(&a));
            prop_assert!(inter.is_subset_of(&union));
            prop_assert!(a.is_subset_of_union(&diff, &inter));
            prop_assert_eq!(diff.is_disjoint(&b), true);
        }
    }
}
