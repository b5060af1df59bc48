//! Growable bitset over vertex ids.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::SmallVec;

/// A set of vertex ids. Stored as little-endian 64-bit words with trailing
/// zero words trimmed, so equal sets compare equal structurally.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: SmallVec<[u64; 2]>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = Self::new();
        s.insert(v);
        s
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::new();
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, v: usize) -> bool {
        let (w, b) = (v / 64, v % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let (w, b) = (v / 64, v % 64);
        if w >= self.words.len() {
            return false;
        }
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        had
    }

    pub fn contains(&self, v: usize) -> bool {
        let (w, b) = (v / 64, v % 64);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.words.truncate(other.words.len());
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= *b;
        }
        self.trim();
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !*b;
        }
        self.trim();
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn with(&self, v: usize) -> VertexSet {
        let mut s = self.clone();
        s.insert(v);
        s
    }

    pub fn without(&self, v: usize) -> VertexSet {
        let mut s = self.clone();
        s.remove(v);
        s
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.len() <= other.words.len()
            && self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, smallest first, then lexicographic by members.
    pub fn subsets(&self) -> Vec<VertexSet> {
        self.subsets_iter().collect()
    }

    /// Lazy form of [`VertexSet::subsets`], same order.
    pub fn subsets_iter(&self) -> Subsets {
        Subsets { members: self.to_vec(), size: 0, idx: Some(Vec::new()) }
    }
}

/// Combinations of growing size, each size in lexicographic order.
pub struct Subsets {
    members: Vec<usize>,
    size: usize,
    idx: Option<Vec<usize>>,
}

impl Iterator for Subsets {
    type Item = VertexSet;
    fn next(&mut self) -> Option<VertexSet> {
        let n = self.members.len();
        let idx = self.idx.as_mut()?;
        let out = idx.iter().map(|&i| self.members[i]).collect();
        let k = self.size;
        match (0..k).rev().find(|&i| idx[i] < n - k + i) {
            Some(i) => {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
            None if k < n => {
                self.size += 1;
                *idx = (0..self.size).collect();
            }
            None => self.idx = None,
        }
        Some(out)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl Ord for VertexSet {
    /// Smaller sets first; equal sizes compare by their sorted member lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Extend<usize> for VertexSet {
    fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
        for v in iter {
            self.insert(v);
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_across_words() {
        let mut s = VertexSet::new();
        assert!(s.insert(3));
        assert!(s.insert(130));
        assert!(!s.insert(3));
        assert_eq!(s.to_vec(), vec![3, 130]);
        s.remove(130);
        assert_eq!(s, VertexSet::singleton(3));
    }

    #[test]
    fn ordering_is_size_then_members() {
        let a: VertexSet = [5].into_iter().collect();
        let b: VertexSet = [0, 1].into_iter().collect();
        let c: VertexSet = [0, 2].into_iter().collect();
        assert!(a < b && b < c);
        assert!(VertexSet::new() < a);
    }

    #[test]
    fn subsets_of_three() {
        let s: VertexSet = [1, 4, 7].into_iter().collect();
        let subs = s.subsets();
        assert_eq!(subs.len(), 8);
        assert!(subs[0].is_empty());
        assert_eq!(subs[7], s);
        assert_eq!(subs[1..4].iter().map(|x| x.to_vec()).collect::<Vec<_>>(), vec![vec![1], vec![4], vec![7]]);
        assert_eq!(subs[4].to_vec(), vec![1, 4]);
        assert_eq!(subs[6].to_vec(), vec![4, 7]);
        assert_eq!(VertexSet::new().subsets(), vec![VertexSet::new()]);
    }

    #[test]
    fn subsets_iter_is_lazy() {
        let s = VertexSet::full(40);
        let first: Vec<VertexSet> = s.subsets_iter().take(42).collect();
        assert!(first[0].is_empty());
        assert_eq!(first[40], VertexSet::singleton(39));
        assert_eq!(first[41].to_vec(), vec![0, 1]);
    }

    #[test]
    fn set_algebra() {
        let a: VertexSet = [1, 2, 3, 70].into_iter().collect();
        let b: VertexSet = [2, 70, 90].into_iter().collect();
        assert_eq!(a.intersection(&b).to_vec(), vec![2, 70]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 3]);
        assert_eq!(a.union(&b).len(), 5);
        assert!(a.intersection(&b).is_subset(&a));
        assert!(a.difference(&b).is_disjoint(&b));
    }
}
