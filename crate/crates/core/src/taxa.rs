//! Taxon identifiers, the taxon universe and a small bit-indexed taxon set.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::ClusterError;

/// Index of a taxon inside a [`TaxonUniverse`].
pub type Taxon = usize;

const WORD: usize = 64;

/// A set of taxon ids.
///
/// Stored as a little-endian bit vector with no trailing zero words, so that
/// structural equality and hashing coincide with set equality. Universes up
/// to 128 taxa never allocate.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct TaxonSet {
    words: SmallVec<[u64; 2]>,
}

impl TaxonSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(t: Taxon) -> Self {
        let mut s = Self::new();
        s.insert(t);
        s
    }

    /// The set `{0, 1, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut words: SmallVec<[u64; 2]> = SmallVec::new();
        let mut left = n;
        while left >= WORD {
            words.push(u64::MAX);
            left -= WORD;
        }
        if left > 0 {
            words.push((1u64 << left) - 1);
        }
        TaxonSet { words }
    }

    fn trim(&mut self) {
        while let Some(&0) = self.words.last() {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, t: Taxon) -> bool {
        let (w, b) = (t / WORD, t % WORD);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn remove(&mut self, t: Taxon) -> bool {
        let (w, b) = (t / WORD, t % WORD);
        if w >= self.words.len() {
            return false;
        }
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        had
    }

    #[inline]
    pub fn contains(&self, t: Taxon) -> bool {
        let (w, b) = (t / WORD, t % WORD);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn union_with(&mut self, other: &TaxonSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &TaxonSet) {
        self.words.truncate(other.words.len());
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= *b;
        }
        self.trim();
    }

    pub fn difference_with(&mut self, other: &TaxonSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !*b;
        }
        self.trim();
    }

    pub fn union(&self, other: &TaxonSet) -> TaxonSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &TaxonSet) -> TaxonSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &TaxonSet) -> TaxonSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn is_subset(&self, other: &TaxonSet) -> bool {
        if self.words.len() > other.words.len() {
            return false;
        }
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &TaxonSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &TaxonSet) -> bool {
        !self.is_disjoint(other)
    }

    /// Smallest member.
    pub fn first(&self) -> Option<Taxon> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<Taxon> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = Taxon;

    fn next(&mut self) -> Option<Taxon> {
        loop {
            if self.current != 0 {
                let b = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + b);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a TaxonSet {
    type Item = Taxon;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<Taxon> for TaxonSet {
    fn from_iter<I: IntoIterator<Item = Taxon>>(iter: I) -> Self {
        let mut s = TaxonSet::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

/// Lexicographic order on the ascending member lists, so `{0,1} < {0,2} < {1}`.
impl Ord for TaxonSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for TaxonSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for TaxonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The ordered list of taxon labels. Taxon ids are positions in this list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaxonUniverse {
    names: Vec<String>,
    index: HashMap<String, Taxon>,
}

impl TaxonUniverse {
    pub fn new<I, S>(names: I) -> Result<Self, ClusterError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(ClusterError::EmptyUniverse);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(ClusterError::EmptyLabel);
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(ClusterError::DuplicateLabel(name.clone()));
            }
        }
        Ok(TaxonUniverse { names, index })
    }

    /// A universe with no taxa; only produced by restricting to the empty set.
    pub(crate) fn empty() -> Self {
        TaxonUniverse {
            names: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, t: Taxon) -> &str {
        &self.names[t]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<Taxon> {
        self.index.get(name).copied()
    }

    pub fn all(&self) -> TaxonSet {
        TaxonSet::full(self.len())
    }

    /// Builds a set from labels; unknown labels are an error.
    pub fn set_of<'a, I>(&self, labels: I) -> Result<TaxonSet, ClusterError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        labels
            .into_iter()
            .map(|l| {
                self.id(l)
                    .ok_or_else(|| ClusterError::UnknownTaxon(l.to_string()))
            })
            .collect()
    }

    pub fn labels_of(&self, set: &TaxonSet) -> Vec<&str> {
        set.iter().map(|t| self.name(t)).collect()
    }

    /// `{a,b,c}` style rendering.
    pub fn format_set(&self, set: &TaxonSet) -> String {
        format!("{{{}}}", self.labels_of(set).join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let a: TaxonSet = [0, 1, 70].into_iter().collect();
        let b: TaxonSet = [1, 2].into_iter().collect();
        assert_eq!(a.len(), 3);
        assert!(a.contains(70));
        assert_eq!(a.intersection(&b).to_vec(), vec![1]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 1, 2, 70]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 70]);
        let mut c = a.clone();
        c.remove(70);
        assert_eq!(c, [0, 1].into_iter().collect());
        assert!(TaxonSet::full(130).contains(129));
        assert_eq!(TaxonSet::full(64).len(), 64);
    }

    #[test]
    fn universe_rejects_duplicates() {
        assert!(TaxonUniverse::new(["a", "b", "a"]).is_err());
        assert!(TaxonUniverse::new(Vec::<String>::new()).is_err());
        let u = TaxonUniverse::new(["x", "y"]).unwrap();
        assert_eq!(u.format_set(&u.all()), "{x,y}");
    }

    proptest! {
        #[test]
        fn set_algebra_matches_btreeset(a in proptest::collection::btree_set(0usize..200, 0..20),
                                        b in proptest::collection::btree_set(0usize..200, 0..20)) {
            let sa: TaxonSet = a.iter().copied().collect();
            let sb: TaxonSet = b.iter().copied().collect();
            prop_assert_eq!(sa.union(&sb).to_vec(), a.union(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.intersection(&sb).to_vec(), a.intersection(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.difference(&sb).to_vec(), a.difference(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
            prop_assert_eq!(sa.is_disjoint(&sb), a.is_disjoint(&b));
            prop_assert_eq!(sa.cmp(&sb), a.iter().cmp(b.iter()));
            // Normalization keeps equality structural.
            prop_assert_eq!(sa.union(&sb).difference(&sb) == sa.difference(&sb), true);
        }
    }
}
