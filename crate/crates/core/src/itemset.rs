//! Sets of item indices.

use std::cmp::Ordering;
use std::fmt;

/// Index of an item inside an [`Instance`](crate::model::Instance).
///
/// Items are stored in id order, so index order is id order.
pub type ItemIdx = usize;

/// A growable bitset of item indices.
///
/// Trailing zero words are always trimmed, so equal sets have equal
/// representations. The total order is lexicographic on the ascending index
/// sequence: `{} < {0} < {0,1} < {0,2} < {1}`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ItemSet {
    words: Vec<u64>,
}

impl ItemSet {
    pub fn new() -> Self {
        ItemSet { words: Vec::new() }
    }

    /// The set `{0, 1, ..., len-1}`.
    pub fn full(len: usize) -> Self {
        (0..len).collect()
    }

    pub fn singleton(item: ItemIdx) -> Self {
        let mut s = ItemSet::new();
        s.insert(item);
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, item: ItemIdx) -> bool {
        let (w, b) = (item / 64, item % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn remove(&mut self, item: ItemIdx) -> bool {
        let (w, b) = (item / 64, item % 64);
        if w >= self.words.len() {
            return false;
        }
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        had
    }

    pub fn contains(&self, item: ItemIdx) -> bool {
        let (w, b) = (item / 64, item % 64);
        self.words.get(w).is_some_and(|x| x & (1 << b) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest element, if any.
    pub fn last(&self) -> Option<ItemIdx> {
        let w = self.words.len().checked_sub(1)?;
        let word = self.words[w];
        Some(w * 64 + 63 - word.leading_zeros() as usize)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn union(&self, other: &ItemSet) -> ItemSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, x) in words.iter_mut().zip(&short.words) {
            *w |= x;
        }
        ItemSet { words }
    }

    pub fn intersection(&self, other: &ItemSet) -> ItemSet {
        let mut s = ItemSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        };
        s.trim();
        s
    }

    pub fn difference(&self, other: &ItemSet) -> ItemSet {
        let mut s = ItemSet {
            words: self
                .words
                .iter()
                .enumerate()
                .map(|(i, a)| a & !other.words.get(i).copied().unwrap_or(0))
                .collect(),
        };
        s.trim();
        s
    }

    pub fn union_with(&mut self, other: &ItemSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, x) in self.words.iter_mut().zip(&other.words) {
            *w |= x;
        }
    }

    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.words.len() <= other.words.len()
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ItemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Elements strictly greater than `item`.
    pub fn above(&self, item: ItemIdx) -> ItemSet {
        self.iter().filter(|&x| x > item).collect()
    }

    pub fn to_vec(&self) -> Vec<ItemIdx> {
        self.iter().collect()
    }
}

impl Ord for ItemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ItemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<ItemIdx> for ItemSet {
    fn from_iter<I: IntoIterator<Item = ItemIdx>>(iter: I) -> Self {
        let mut s = ItemSet::new();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl<'a> IntoIterator for &'a ItemSet {
    type Item = ItemIdx;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = ItemIdx;

    fn next(&mut self) -> Option<ItemIdx> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
            self.current = *self.words.get(self.word)?;
        }
    }
}
