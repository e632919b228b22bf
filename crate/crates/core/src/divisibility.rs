//! Left and right divisibility, divisor sets, and common multiples and
//! divisors up to a length bound.
//!
//! Sets of common multiples are infinite in general, so those operations
//! take an explicit length bound and say so in their result type.

use std::sync::Arc;

use rustc_hash::FxHashSet;

use crate::engine::{EquivClass, Monoid};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Which side a divisor sits on, or which side a multiple extends.
///
/// `u` left-divides `v` when `v = u·q`. The right multiples of `j` are the
/// elements `j·q`, so they are the elements that `j` left-divides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A result computed only over elements of length at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounded<T> {
    pub value: T,
    pub bound: usize,
}

/// Every divisor of `element` on one side, as canonical words ordered by
/// length and then lexicographically. Includes the empty word and `element`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSet {
    pub element: Word,
    pub side: Side,
    pub divisors: Vec<Word>,
}

impl DivisorSet {
    pub fn contains(&self, canonical: &Word) -> bool {
        self.divisors.contains(canonical)
    }
}

/// Two letters whose minimal common multiples on one side are not unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcmFailure {
    pub pair: (Letter, Letter),
    pub side: Side,
    /// The minimal common multiples found, at least two of them.
    pub minimal: Vec<Word>,
    pub bound: usize,
}

/// Orders canonical words by length, then lexicographically.
pub fn shortlex(a: &Word, b: &Word) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Monoid {
    /// Some spelling of `q` with `u·q ≐ v`, if `u` left-divides `v`.
    pub fn left_quotient(&self, u: &[Letter], v: &[Letter]) -> Result<Option<Word>> {
        if u.len() > v.len() {
            return Ok(None);
        }
        if u.is_empty() {
            return Ok(Some(Word::from(v)));
        }
        let cu = self.enumerate_class(u)?;
        let cv = self.enumerate_class(v)?;
        Ok(cv.members().iter().find(|m| cu.contains(&m[..u.len()])).map(|m| m.suffix_from(u.len())))
    }

    /// Some spelling of `q` with `q·u ≐ v`, if `u` right-divides `v`.
    pub fn right_quotient(&self, u: &[Letter], v: &[Letter]) -> Result<Option<Word>> {
        if u.len() > v.len() {
            return Ok(None);
        }
        if u.is_empty() {
            return Ok(Some(Word::from(v)));
        }
        let cut = v.len() - u.len();
        let cu = self.enumerate_class(u)?;
        let cv = self.enumerate_class(v)?;
        Ok(cv.members().iter().find(|m| cu.contains(&m[cut..])).map(|m| m.prefix(cut)))
    }

    /// The canonical quotient `q` with `u·q ≐ v`, or `None` when `u` does not
    /// left-divide `v`.
    pub fn left_divides(&self, u: &[Letter], v: &[Letter]) -> Result<Option<Word>> {
        match self.left_quotient(u, v)? {
            Some(q) => Ok(Some(self.canonical(&q)?)),
            None => Ok(None),
        }
    }

    /// The canonical quotient `q` with `q·u ≐ v`, or `None`.
    pub fn right_divides(&self, u: &[Letter], v: &[Letter]) -> Result<Option<Word>> {
        match self.right_quotient(u, v)? {
            Some(q) => Ok(Some(self.canonical(&q)?)),
            None => Ok(None),
        }
    }

    pub fn divides(&self, side: Side, u: &[Letter], v: &[Letter]) -> Result<Option<Word>> {
        match side {
            Side::Left => self.left_divides(u, v),
            Side::Right => self.right_divides(u, v),
        }
    }

    /// Whether `u` divides `v` on `side`, without canonicalizing the quotient.
    pub fn is_divisor(&self, side: Side, u: &[Letter], v: &[Letter]) -> Result<bool> {
        Ok(match side {
            Side::Left => self.left_quotient(u, v)?.is_some(),
            Side::Right => self.right_quotient(u, v)?.is_some(),
        })
    }

    /// Every canonical quotient `q` with `u·q ≐ v`. In a cancellative monoid
    /// there is at most one.
    pub fn left_quotients(&self, u: &[Letter], v: &[Letter]) -> Result<Vec<Word>> {
        if u.len() > v.len() {
            return Ok(Vec::new());
        }
        let cu = self.enumerate_class(u)?;
        let cv = self.enumerate_class(v)?;
        let mut out: Vec<Word> = Vec::new();
        for m in cv.members() {
            if cu.contains(&m[..u.len()]) {
                let q = self.canonical(&m[u.len()..])?;
                if !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// All divisors of `v` on `side`.
    pub fn divisor_set(&self, v: &[Letter], side: Side) -> Result<DivisorSet> {
        let cv = self.enumerate_class(v)?;
        let n = v.len();
        let mut seen: FxHashSet<Word> = FxHashSet::default();
        let mut divisors = Vec::new();
        for m in cv.members() {
            for i in 0..=n {
                let piece: &[Letter] = match side {
                    Side::Left => &m[..i],
                    Side::Right => &m[n - i..],
                };
                if seen.contains(piece) {
                    continue;
                }
                let c = self.enumerate_class(piece)?;
                seen.extend(c.members().iter().cloned());
                divisors.push(c.canonical().clone());
            }
        }
        divisors.sort_by(shortlex);
        Ok(DivisorSet { element: cv.canonical().clone(), side, divisors })
    }

    pub fn left_divisor_set(&self, v: &[Letter]) -> Result<DivisorSet> {
        self.divisor_set(v, Side::Left)
    }

    pub fn right_divisor_set(&self, v: &[Letter]) -> Result<DivisorSet> {
        self.divisor_set(v, Side::Right)
    }

    /// Classes of length `len + 1` of the form `c·x` (side Right) or `x·c`
    /// (side Left) for a letter `x`, deduplicated.
    fn extensions(&self, level: &[Arc<EquivClass>], side: Side) -> Result<Vec<Arc<EquivClass>>> {
        let mut seen: FxHashSet<Word> = FxHashSet::default();
        let mut out = Vec::new();
        for c in level {
            for x in self.atoms() {
                let w = match side {
                    Side::Right => c.canonical().cat(&[x]),
                    Side::Left => Word::letter(x).cat(c.canonical()),
                };
                if seen.contains(&w) {
                    continue;
                }
                let e = self.enumerate_class(&w)?;
                seen.extend(e.members().iter().cloned());
                out.push(e);
            }
        }
        out.sort_by(|a, b| a.canonical().cmp(b.canonical()));
        Ok(out)
    }

    /// Common multiples of `set` of length at most `bound`. Side Right gives
    /// the elements every member of `set` left-divides.
    pub fn common_multiples_bounded(&self, set: &[Word], side: Side, bound: usize) -> Result<Bounded<Vec<Word>>> {
        let longest = set
            .iter()
            .max_by_key(|w| w.len())
            .ok_or_else(|| Error::Precondition("common multiples of an empty set".into()))?;
        let mut out = Vec::new();
        if longest.len() <= bound {
            let mut level = vec![self.enumerate_class(longest)?];
            for len in longest.len()..=bound {
                if len > longest.len() {
                    level = self.extensions(&level, side)?;
                }
                for c in &level {
                    let mut all = true;
                    for j in set {
                        if !self.is_divisor(side.flip(), j, c.canonical())? {
                            all = false;
                            break;
                        }
                    }
                    if all {
                        out.push(c.canonical().clone());
                    }
                }
            }
        }
        out.sort_by(shortlex);
        Ok(Bounded { value: out, bound })
    }

    /// Minimal common multiples of length at most `bound`. Minimality is exact
    /// for the elements returned, since all their divisors are shorter; longer
    /// minimal elements are simply not reported.
    pub fn mcm_bounded(&self, set: &[Word], side: Side, bound: usize) -> Result<Bounded<Vec<Word>>> {
        let all = self.common_multiples_bounded(set, side, bound)?.value;
        let mut out = Vec::new();
        for (i, u) in all.iter().enumerate() {
            let mut minimal = true;
            for v in &all[..i] {
                if v.len() < u.len() && self.is_divisor(side.flip(), v, u)? {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                out.push(u.clone());
            }
        }
        Ok(Bounded { value: out, bound })
    }

    /// Common divisors of `set` on `side`, in shortlex order.
    pub fn common_divisors(&self, set: &[Word], side: Side) -> Result<Vec<Word>> {
        let (first, rest) = set
            .split_first()
            .ok_or_else(|| Error::Precondition("common divisors of an empty set".into()))?;
        let mut common = self.divisor_set(first, side)?.divisors;
        for j in rest {
            let d = self.divisor_set(j, side)?;
            common.retain(|w| d.contains(w));
        }
        Ok(common)
    }

    /// Maximal common divisors: common divisors on `side` that divide no
    /// other common divisor on that side.
    pub fn mcd(&self, set: &[Word], side: Side) -> Result<Vec<Word>> {
        let common = self.common_divisors(set, side)?;
        let mut out = Vec::new();
        for (i, u) in common.iter().enumerate() {
            let mut maximal = true;
            for v in &common[i + 1..] {
                if v.len() > u.len() && self.is_divisor(side, u, v)? {
                    maximal = false;
                    break;
                }
            }
            if maximal {
                out.push(u.clone());
            }
        }
        Ok(out)
    }

    /// The first pair of distinct letters, in alphabet order, with two or more
    /// minimal common multiples of length at most `bound` on `side`.
    pub fn lcm_failure_witness(&self, side: Side, bound: usize) -> Result<Option<LcmFailure>> {
        let atoms = self.atoms();
        for (i, &x) in atoms.iter().enumerate() {
            for &y in &atoms[i + 1..] {
                let m = self.mcm_bounded(&[Word::letter(x), Word::letter(y)], side, bound)?;
                if m.value.len() >= 2 {
                    return Ok(Some(LcmFailure { pair: (x, y), side, minimal: m.value, bound }));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::all_words;

    fn bii() -> Monoid {
        Monoid::parse("generators: a b c\nrelation: c b b = b b a\nrelation: a b = b c\nrelation: a c = c a\n").unwrap()
    }

    // Oracle: u |_l v iff some word q of the right length has u·q ≐ v.
    fn left_divides_oracle(m: &Monoid, u: &Word, v: &Word) -> bool {
        u.len() <= v.len() && all_words(m.rank(), v.len() - u.len()).any(|q| m.words_equal(&u.cat(&q), v).unwrap())
    }

    #[test]
    fn left_division_matches_exhaustive_quotient_search() {
        let m = bii();
        for n in 0..=4 {
            for v in all_words(3, n) {
                for k in 0..=n {
                    for u in all_words(3, k) {
                        let got = m.left_divides(&u, &v).unwrap();
                        assert_eq!(got.is_some(), left_divides_oracle(&m, &u, &v), "{} | {}", m.fmt(&u), m.fmt(&v));
                        if let Some(q) = got {
                            assert!(m.words_equal(&u.cat(&q), &v).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn right_division_is_left_division_in_reverse() {
        let m = bii();
        let r = m.reversed();
        for n in 0..=5 {
            for v in all_words(3, n) {
                for k in 1..=n.min(3) {
                    for u in all_words(3, k) {
                        let direct = m.right_divides(&u, &v).unwrap();
                        let mirrored = r.left_divides(&u.reversed(), &v.reversed()).unwrap();
                        assert_eq!(direct.map(|q| m.canonical(&q).unwrap()), mirrored.map(|q| m.canonical(&q.reversed()).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn abb_left_division_examples() {
        let m = bii();
        let abb = m.word("abb").unwrap();
        assert_eq!(m.left_divides(&m.word("a").unwrap(), &abb).unwrap(), Some(m.word("bb").unwrap()));
        assert_eq!(m.left_divides(&m.word("b").unwrap(), &abb).unwrap(), Some(m.word("cb").unwrap()));
        assert_eq!(m.left_divides(&m.word("c").unwrap(), &abb).unwrap(), None);
    }

    #[test]
    fn divisor_sets_of_abb() {
        let m = bii();
        let d = m.left_divisor_set(&m.word("abb").unwrap()).unwrap();
        let names: Vec<String> = d.divisors.iter().map(|w| m.fmt(w)).collect();
        // class(abb) = {abb, bcb}; prefixes e, a, b, ab=bc, bc, abb.
        assert_eq!(names, ["e", "a", "b", "a b", "a b b"]);
    }

    #[test]
    fn bc_has_no_unique_lcm() {
        let m = bii();
        let mcm = m.mcm_bounded(&[m.word("b").unwrap(), m.word("c").unwrap()], Side::Right, 6).unwrap();
        let expected: Vec<Word> = ["bba", "bcba", "bccba", "bcccba"].iter().map(|s| m.canonical(&m.word(s).unwrap()).unwrap()).collect();
        let mut got = mcm.value.clone();
        got.sort();
        let mut exp = expected.clone();
        exp.sort();
        assert_eq!(got, exp);
        let w = m.lcm_failure_witness(Side::Right, 6).unwrap().unwrap();
        assert_eq!(w.pair, (1, 2));
    }

    #[test]
    fn ab_and_ac_have_unique_lcm() {
        let m = bii();
        let ab = m.mcm_bounded(&[m.word("a").unwrap(), m.word("b").unwrap()], Side::Right, 6).unwrap();
        assert_eq!(ab.value, vec![m.canonical(&m.word("ab").unwrap()).unwrap()]);
        let ac = m.mcm_bounded(&[m.word("a").unwrap(), m.word("c").unwrap()], Side::Right, 6).unwrap();
        assert_eq!(ac.value, vec![m.word("ac").unwrap()]);
    }

    #[test]
    fn mcd_of_a_pair() {
        let m = bii();
        let g = m.mcd(&[m.word("abb").unwrap(), m.word("bca").unwrap()], Side::Left).unwrap();
        assert_eq!(g, vec![m.canonical(&m.word("ab").unwrap()).unwrap()]);
    }

    #[test]
    fn common_multiples_need_a_nonempty_set() {
        let m = bii();
        assert!(matches!(m.common_multiples_bounded(&[], Side::Right, 3), Err(Error::Precondition(_))));
    }
}
