//! Words over a small alphabet of generator ids.

use std::fmt;
use std::ops::Deref;

/// A generator id. Presentations are limited to 255 generators.
pub type Letter = u8;

/// A word in the free monoid on the generators, stored as generator ids.
///
/// Ordering is lexicographic on ids, which matches the declared alphabet
/// order, so the least member of a set of equal-length words is its
/// canonical representative.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(x: Letter) -> Self {
        Word(vec![x])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Letter> {
        self.0
    }

    /// Concatenation `self · other`.
    pub fn cat(&self, other: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    /// Concatenation of any number of pieces.
    pub fn concat<'a, I>(parts: I) -> Word
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let mut v = Vec::new();
        for p in parts {
            v.extend_from_slice(&p.0);
        }
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    /// Number of occurrences of `x`.
    pub fn count(&self, x: Letter) -> usize {
        self.0.iter().filter(|&&y| y == x).count()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Whether `needle` occurs as a contiguous factor.
    pub fn contains_factor(&self, needle: &[Letter]) -> bool {
        needle.is_empty() || self.0.windows(needle.len()).any(|w| w == needle)
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl std::borrow::Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

/// Iterates over every word of length `n` on `k` letters in lexicographic order.
pub fn all_words(k: usize, n: usize) -> impl Iterator<Item = Word> {
    let total = (k as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut idx| {
        let mut v = vec![0 as Letter; n];
        for slot in v.iter_mut().rev() {
            *slot = (idx % k as u64) as Letter;
            idx /= k as u64;
        }
        Word(v)
    })
}

/// Position of a word in the lexicographic enumeration of its length.
pub(crate) fn word_rank(w: &[Letter], k: usize) -> u64 {
    w.iter().fold(0u64, |acc, &x| acc * k as u64 + x as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_words_are_lexicographic_and_ranked() {
        let ws: Vec<Word> = all_words(3, 3).collect();
        assert_eq!(ws.len(), 27);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
        for (i, w) in ws.iter().enumerate() {
            assert_eq!(word_rank(w, 3), i as u64);
        }
    }

    #[test]
    fn factor_search() {
        let w = Word::new(vec![0, 1, 2, 1]);
        assert!(w.contains_factor(&[1, 2]));
        assert!(!w.contains_factor(&[2, 2]));
        assert!(w.contains_factor(&[]));
    }

    #[test]
    fn empty_alphabet_length_zero_has_one_word() {
        assert_eq!(all_words(0, 0).count(), 1);
        assert_eq!(all_words(2, 0).next(), Some(Word::empty()));
    }
}
