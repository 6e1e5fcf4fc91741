//! A small growable-free bit set over `0..len`.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_iter_with_len<I: IntoIterator<Item = usize>>(len: usize, items: I) -> Self {
        let mut s = BitSet::new(len);
        for i in items {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// True iff some `i` has both `i` and `i + shift` in the set.
    pub fn overlaps_shifted(&self, shift: usize) -> bool {
        if shift >= self.len {
            return false;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        let n = self.words.len();
        for i in 0..n - ws {
            // bits of (self >> shift) at word i
            let lo = self.words[i + ws] >> bs;
            let hi = if bs != 0 && i + ws + 1 < n {
                self.words[i + ws + 1] << (64 - bs)
            } else {
                0
            };
            if self.words[i] & (lo | hi) != 0 {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = BitSet::new(130);
        for i in [0, 5, 64, 129] {
            s.insert(i);
        }
        assert_eq!(s.count(), 4);
        assert!(s.contains(64));
        assert!(!s.contains(63));
        assert!(!s.contains(1000));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 5, 64, 129]);
        s.remove(5);
        assert_eq!(s.count(), 3);
    }

    #[test]
    fn shifted_overlap_matches_naive() {
        let items = [3usize, 10, 70, 71, 140, 199];
        let s = BitSet::from_iter_with_len(200, items);
        for shift in 1..200 {
            let naive = items.iter().any(|&i| items.contains(&(i + shift)));
            assert_eq!(s.overlaps_shifted(shift), naive, "shift {shift}");
        }
    }
}
