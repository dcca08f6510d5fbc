use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

/// A set of element ids stored as a packed bitset.
///
/// Universes up to 64 elements fit in one inline word, so intersection tests
/// in the coverage-probability inner loop are a single AND. Trailing zero words
/// are trimmed, which keeps the derived `Eq`/`Hash` canonical.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ElementSet {
    words: SmallVec<[u64; 1]>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::new();
        for u in 0..n {
            s.insert(u);
        }
        s
    }

    pub fn singleton(u: usize) -> Self {
        let mut s = Self::new();
        s.insert(u);
        s
    }

    pub fn from_bits(bits: u64) -> Self {
        let mut s = Self { words: SmallVec::from_slice(&[bits]) };
        s.trim();
        s
    }

    /// Low 64 bits; exact whenever every id is below 64.
    pub fn low_bits(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, u: usize) -> bool {
        let (w, b) = (u / 64, u % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, u: usize) -> bool {
        let (w, b) = (u / 64, u % 64);
        if w >= self.words.len() {
            return false;
        }
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        present
    }

    pub fn contains(&self, u: usize) -> bool {
        let (w, b) = (u / 64, u % 64);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest id plus one, or 0 for the empty set.
    pub fn bound(&self) -> usize {
        match self.words.last() {
            None => 0,
            Some(&w) => (self.words.len() - 1) * 64 + 64 - w.leading_zeros() as usize,
        }
    }

    pub fn intersects(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(other.words.iter()).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let len = self.words.len().max(other.words.len());
        let words = (0..len)
            .map(|i| self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0))
            .collect();
        ElementSet { words }
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut s = ElementSet {
            words: self.words.iter().zip(other.words.iter()).map(|(a, b)| a & b).collect(),
        };
        s.trim();
        s
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        let mut s = ElementSet {
            words: self
                .words
                .iter()
                .enumerate()
                .map(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0))
                .collect(),
        };
        s.trim();
        s
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        *self = self.union(other);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElementSet::new();
        for u in iter {
            s.insert(u);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

/// Lexicographic order on the sorted id sequences (`{0,5} < {1}`, `{0} < {0,1}`).
impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(deserializer)?;
        Ok(ids.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: ElementSet = [0usize, 3, 70].iter().collect();
        let b: ElementSet = [3usize, 4].iter().collect();
        assert_eq!(a.len(), 3);
        assert!(a.contains(70));
        assert!(a.intersects(&b));
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 70]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 3, 4, 70]);
        assert_eq!(a.bound(), 71);
        let mut c = a.clone();
        c.remove(70);
        assert_eq!(c, [0usize, 3].iter().collect());
        assert!(c.is_subset(&a));
        assert!(!a.is_subset(&c));
    }

    #[test]
    fn canonical_after_removal() {
        let mut a = ElementSet::singleton(100);
        a.remove(100);
        assert_eq!(a, ElementSet::new());
        assert!(a.is_empty());
        assert_eq!(a.bound(), 0);
    }

    #[test]
    fn lexicographic_order() {
        let s = |v: &[usize]| v.iter().collect::<ElementSet>();
        assert!(s(&[0, 5]) < s(&[1]));
        assert!(s(&[0]) < s(&[0, 1]));
        assert!(s(&[]) < s(&[0]));
    }
}
