//! Fixed-width bitsets over the arc ids of one configuration.
//!
//! All sets built against the same `PointConfig` have identical word counts,
//! so equality, ordering and hashing are plain word comparisons. This is the
//! canonical triangulation encoding used as the search key everywhere.

use smallvec::SmallVec;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcSet {
    words: SmallVec<[u64; 4]>,
}

impl ArcSet {
    pub fn empty(nbits: usize) -> Self {
        let nwords = nbits.div_ceil(64).max(1);
        ArcSet { words: smallvec::smallvec![0; nwords] }
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(nbits: usize, ids: I) -> Self {
        let mut s = Self::empty(nbits);
        for id in ids {
            s.insert(id);
        }
        s
    }

    #[inline]
    pub fn contains(&self, id: usize) -> bool {
        (self.words[id / 64] >> (id % 64)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, id: usize) {
        self.words[id / 64] |= 1 << (id % 64);
    }

    #[inline]
    pub fn remove(&mut self, id: usize) {
        self.words[id / 64] &= !(1 << (id % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ArcSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &ArcSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset_of(&self, other: &ArcSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Number of ids present in `self` but not in `other`.
    pub fn diff_count(&self, other: &ArcSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    /// The single id of `self \ other`; panics unless exactly one exists.
    pub fn single_difference(&self, other: &ArcSet) -> Option<usize> {
        let mut found = None;
        for (i, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let mut d = a & !b;
            while d != 0 {
                let bit = d.trailing_zeros() as usize;
                if found.is_some() {
                    return None;
                }
                found = Some(i * 64 + bit);
                d &= d - 1;
            }
        }
        found
    }

    pub fn iter(&self) -> ArcSetIter<'_> {
        ArcSetIter { set: self, word: 0, mask: self.words[0] }
    }
}

impl std::fmt::Debug for ArcSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct ArcSetIter<'a> {
    set: &'a ArcSet,
    word: usize,
    mask: u64,
}

impl Iterator for ArcSetIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.mask != 0 {
                let bit = self.mask.trailing_zeros() as usize;
                self.mask &= self.mask - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
            if self.word >= self.set.words.len() {
                return None;
            }
            self.mask = self.set.words[self.word];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = ArcSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.len(), 3);
        assert!(s.contains(64));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn diffs() {
        let a = ArcSet::from_ids(70, [1, 5, 65]);
        let b = ArcSet::from_ids(70, [1, 65, 66]);
        assert_eq!(a.diff_count(&b), 1);
        assert_eq!(a.single_difference(&b), Some(5));
        assert_eq!(b.single_difference(&a), Some(66));
        assert!(ArcSet::from_ids(70, [1]).is_subset_of(&a));
    }
}
