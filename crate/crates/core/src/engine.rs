//! Equivalence classes of words under the defining relations.
//!
//! Relations are homogeneous, so a class is a finite set of equal-length
//! words and can be found by breadth-first search over single substitutions.

use std::sync::Arc;

use dashmap::DashMap;
use rustc_hash::{FxBuildHasher, FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{all_words, word_rank, Letter, Word};

/// Default limit on the number of members of a single class.
pub const DEFAULT_CEILING: usize = 5_000_000;

/// Default limit on the number of words held in the class memo.
pub const DEFAULT_CACHE_LIMIT: usize = 4_000_000;

/// All words equivalent to a given one, sorted. The first member is the
/// canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivClass {
    members: Vec<Word>,
}

impl EquivClass {
    pub(crate) fn from_sorted(members: Vec<Word>) -> Self {
        debug_assert!(!members.is_empty());
        debug_assert!(members.windows(2).all(|p| p[0] < p[1]));
        EquivClass { members }
    }

    pub fn canonical(&self) -> &Word {
        &self.members[0]
    }

    pub fn members(&self) -> &[Word] {
        &self.members
    }

    /// Number of member words.
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Length of every member.
    pub fn word_len(&self) -> usize {
        self.members[0].len()
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        w.len() == self.word_len() && self.members.binary_search_by(|m| m.letters().cmp(w)).is_ok()
    }
}

type Rule = (Box<[Letter]>, Box<[Letter]>);

/// A presentation together with its rewriting index and class memo.
///
/// Shared by reference across threads; the memo is a concurrent map.
pub struct Monoid {
    pres: Presentation,
    // Oriented rules indexed by the first letter of the left side.
    rules: Vec<Vec<Rule>>,
    ceiling: usize,
    cache_limit: usize,
    cache: DashMap<Word, Arc<EquivClass>, FxBuildHasher>,
    conserved: Vec<Letter>,
}

impl std::fmt::Debug for Monoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Monoid").field("pres", &self.pres).field("ceiling", &self.ceiling).finish()
    }
}

impl Monoid {
    pub fn new(pres: Presentation) -> Self {
        let mut rules: Vec<Vec<Rule>> = vec![Vec::new(); pres.rank()];
        for r in pres.relations() {
            for (a, b) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
                rules[a[0] as usize].push((a.letters().into(), b.letters().into()));
            }
        }
        let conserved = pres.conserved_letters();
        Monoid {
            pres,
            rules,
            ceiling: DEFAULT_CEILING,
            cache_limit: DEFAULT_CACHE_LIMIT,
            cache: DashMap::with_hasher(FxBuildHasher),
            conserved,
        }
    }

    /// Parses the text format and builds the monoid.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Monoid::new(Presentation::parse(text)?))
    }

    pub fn with_ceiling(mut self, ceiling: usize) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn with_cache_limit(mut self, limit: usize) -> Self {
        self.cache_limit = limit;
        self
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn rank(&self) -> usize {
        self.pres.rank()
    }

    pub fn ceiling(&self) -> usize {
        self.ceiling
    }

    /// Parses a word against this presentation's alphabet.
    pub fn word(&self, text: &str) -> Result<Word> {
        self.pres.parse_word(text)
    }

    pub fn fmt(&self, w: &[Letter]) -> String {
        self.pres.format_word(w)
    }

    /// The atoms: every generator, since relations are homogeneous and
    /// aliases were folded away when the presentation was built.
    pub fn atoms(&self) -> Vec<Letter> {
        (0..self.rank() as Letter).collect()
    }

    /// Letters whose count is invariant under the relations.
    pub fn conserved_letters(&self) -> &[Letter] {
        &self.conserved
    }

    /// The monoid of the reversed presentation, sharing the ceiling.
    pub fn reversed(&self) -> Monoid {
        Monoid::new(self.pres.reversed()).with_ceiling(self.ceiling).with_cache_limit(self.cache_limit)
    }

    /// Words reachable from `w` by one substitution, sorted and deduplicated.
    pub fn elementary_neighbors(&self, w: &[Letter]) -> Vec<Word> {
        let mut out = Vec::new();
        self.for_each_neighbor(w, |n| out.push(Word::from(n)));
        out.sort();
        out.dedup();
        out
    }

    fn for_each_neighbor(&self, w: &[Letter], mut f: impl FnMut(&[Letter])) {
        let mut buf = w.to_vec();
        for i in 0..w.len() {
            for (lhs, rhs) in &self.rules[w[i] as usize] {
                if w[i..].starts_with(lhs) {
                    buf[i..i + rhs.len()].copy_from_slice(rhs);
                    f(&buf);
                    buf[i..i + rhs.len()].copy_from_slice(&w[i..i + lhs.len()]);
                }
            }
        }
    }

    /// Breadth-first closure of `w` without touching the memo.
    pub fn enumerate_uncached(&self, w: &[Letter]) -> Result<EquivClass> {
        let bits = (usize::BITS - self.rank().saturating_sub(1).leading_zeros()).max(1) as usize;
        if bits * w.len() <= 128 {
            self.bfs(w, |x: &[Letter]| x.iter().fold(0u128, |acc, &c| (acc << bits) | c as u128))
        } else {
            self.bfs(w, |x: &[Letter]| Word::from(x))
        }
    }

    fn bfs<K: std::hash::Hash + Eq>(&self, w: &[Letter], key: impl Fn(&[Letter]) -> K) -> Result<EquivClass> {
        let mut seen: FxHashSet<K> = FxHashSet::default();
        seen.insert(key(w));
        let mut queue: Vec<Word> = vec![Word::from(w)];
        let mut head = 0;
        while head < queue.len() {
            let cur = std::mem::take(&mut queue[head]);
            let mut fresh = Vec::new();
            self.for_each_neighbor(&cur, |n| {
                if seen.insert(key(n)) {
                    fresh.push(Word::from(n));
                }
            });
            queue[head] = cur;
            head += 1;
            queue.extend(fresh);
            if queue.len() > self.ceiling {
                return Err(Error::CeilingExceeded { ceiling: self.ceiling });
            }
        }
        queue.sort_unstable();
        Ok(EquivClass::from_sorted(queue))
    }

    /// The equivalence class of `w`, memoized.
    pub fn enumerate_class(&self, w: &[Letter]) -> Result<Arc<EquivClass>> {
        if let Some(c) = self.cache.get(w) {
            return Ok(c.clone());
        }
        let class = Arc::new(self.enumerate_uncached(w)?);
        self.remember(&class);
        Ok(class)
    }

    fn remember(&self, class: &Arc<EquivClass>) {
        if self.cache_limit == 0 || class.size() > self.cache_limit {
            return;
        }
        if self.cache.len() + class.size() > self.cache_limit {
            self.cache.clear();
        }
        for m in class.members() {
            self.cache.insert(m.clone(), class.clone());
        }
    }

    /// Seeds the memo with a class read from a persisted cache.
    pub fn insert_class(&self, class: EquivClass) {
        self.remember(&Arc::new(class));
    }

    /// Distinct classes currently held in the memo, by canonical word.
    pub fn cached_classes(&self) -> Vec<Arc<EquivClass>> {
        let mut out: Vec<Arc<EquivClass>> = Vec::new();
        for e in self.cache.iter() {
            if e.key() == e.value().canonical() {
                out.push(e.value().clone());
            }
        }
        out.sort_by(|a, b| a.canonical().cmp(b.canonical()));
        out
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
    }

    /// Writes the memo as `class-begin` / member lines / `class-end` blocks,
    /// classes in canonical order.
    pub fn save_cache(&self, mut out: impl std::io::Write) -> Result<usize> {
        let classes = self.cached_classes();
        for c in &classes {
            writeln!(out, "class-begin")?;
            for m in c.members() {
                writeln!(out, "{}", self.fmt(m))?;
            }
            writeln!(out, "class-end")?;
        }
        Ok(classes.len())
    }

    /// Reads blocks written by `save_cache` into the memo. Each block is
    /// checked to be closed under single substitutions before it is trusted.
    pub fn load_cache(&self, text: &str) -> Result<usize> {
        let mut current: Option<Vec<Word>> = None;
        let mut loaded = 0;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            let bad = |msg: &str| Error::Cache(format!("line {}: {msg}", i + 1));
            match (line, current.as_mut()) {
                ("", _) => {}
                ("class-begin", None) => current = Some(Vec::new()),
                ("class-end", Some(_)) => {
                    let mut members = current.take().unwrap_or_default();
                    members.sort_unstable();
                    members.dedup();
                    if members.is_empty() || members.iter().any(|m| m.len() != members[0].len()) {
                        return Err(bad("block is empty or mixes lengths"));
                    }
                    let set: FxHashSet<&Word> = members.iter().collect();
                    let closed =
                        members.iter().all(|m| self.elementary_neighbors(m).iter().all(|n| set.contains(n)));
                    if !closed {
                        return Err(bad("block is not closed under the relations"));
                    }
                    self.insert_class(EquivClass::from_sorted(members));
                    loaded += 1;
                }
                (_, Some(members)) => members.push(self.word(line).map_err(|e| bad(&e.to_string()))?),
                _ => return Err(bad("expected class-begin")),
            }
        }
        if current.is_some() {
            return Err(Error::Cache("unterminated class block".into()));
        }
        Ok(loaded)
    }

    pub fn canonical(&self, w: &[Letter]) -> Result<Word> {
        Ok(self.enumerate_class(w)?.canonical().clone())
    }

    /// Whether the two words represent the same element.
    pub fn words_equal(&self, u: &[Letter], v: &[Letter]) -> Result<bool> {
        if u.len() != v.len() {
            return Ok(false);
        }
        if u == v {
            return Ok(true);
        }
        if !self.same_conserved_counts(u, v) {
            return Ok(false);
        }
        Ok(self.enumerate_class(u)?.contains(v))
    }

    /// Whether `u` and `v` agree in length and in every conserved letter count.
    pub fn same_conserved_counts(&self, u: &[Letter], v: &[Letter]) -> bool {
        u.len() == v.len()
            && self.conserved.iter().all(|&x| {
                u.iter().filter(|&&y| y == x).count() == v.iter().filter(|&&y| y == x).count()
            })
    }

    /// Every class whose members have length `n`, in canonical order.
    pub fn all_classes(&self, n: usize) -> Result<Vec<Arc<EquivClass>>> {
        let mut out = Vec::new();
        self.for_each_class(n, |c| {
            out.push(Arc::new(c));
            Ok(())
        })?;
        Ok(out)
    }

    /// Every class of length at most `n`, shortest first.
    pub fn classes_up_to(&self, n: usize) -> Result<Vec<Arc<EquivClass>>> {
        let mut out = Vec::new();
        for len in 0..=n {
            out.extend(self.all_classes(len)?);
        }
        Ok(out)
    }

    /// Streams every class of length `n` in canonical order without filling
    /// the memo. Words are visited in lexicographic order, so the first
    /// unvisited word of a class is its canonical representative.
    pub fn for_each_class(&self, n: usize, mut f: impl FnMut(EquivClass) -> Result<()>) -> Result<()> {
        let k = self.rank();
        let total = (k as u128).pow(n as u32);
        if total > (1u128 << 34) {
            return Err(Error::Precondition(format!("{total} words of length {n} is too many to scan")));
        }
        let mut seen = vec![0u64; (total as usize).div_ceil(64)];
        for w in all_words(k, n) {
            let r = word_rank(&w, k) as usize;
            if seen[r / 64] >> (r % 64) & 1 == 1 {
                continue;
            }
            let c = self.enumerate_uncached(&w)?;
            for m in c.members() {
                let r = word_rank(m, k) as usize;
                seen[r / 64] |= 1 << (r % 64);
            }
            f(c)?;
        }
        Ok(())
    }
}

/// Two spellings `a·x·b ≐ a·y·b` whose middles are not equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationViolation {
    pub a: Word,
    pub x: Word,
    pub y: Word,
    pub b: Word,
}

/// Outcome of [`Monoid::cancellation_probe`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationReport {
    pub max_len: usize,
    /// Number of `(a, b, x, y)` instances with `a·x·b ≐ a·y·b` examined.
    pub checked: u64,
    pub violation: Option<CancellationViolation>,
}

impl Monoid {
    /// Checks two-sided cancellation on every equation `a·x·b ≐ a·y·b` of
    /// length at most `max_len`: the spellings of a class are grouped by
    /// prefix and suffix, and the middles in a group must share a class.
    pub fn cancellation_probe(&self, max_len: usize) -> Result<CancellationReport> {
        let k = self.rank();
        // class_of[n][rank(w)] is the index of the class of w among length-n classes.
        let mut class_of: Vec<Vec<u32>> = Vec::new();
        let mut classes: Vec<Vec<EquivClass>> = Vec::new();
        for n in 0..=max_len {
            let mut ids = vec![0u32; k.pow(n as u32)];
            let mut list = Vec::new();
            self.for_each_class(n, |c| {
                for m in c.members() {
                    ids[word_rank(m, k) as usize] = list.len() as u32;
                }
                list.push(c);
                Ok(())
            })?;
            class_of.push(ids);
            classes.push(list);
        }
        let mut checked = 0u64;
        for list in &classes {
            for c in list {
                let n = c.word_len();
                for i in 0..=n {
                    for j in 0..=n - i {
                        let mid = n - i - j;
                        // (prefix, suffix) -> (class id of the middle, the middle)
                        let mut groups: FxHashMap<_, (u32, &[Letter])> = FxHashMap::default();
                        for m in c.members() {
                            let key = (&m[..i], &m[n - j..]);
                            let id = class_of[mid][word_rank(&m[i..n - j], k) as usize];
                            checked += 1;
                            match groups.get(&key) {
                                None => {
                                    groups.insert(key, (id, &m[i..n - j]));
                                }
                                Some(&(other, y)) if other != id => {
                                    return Ok(CancellationReport {
                                        max_len,
                                        checked,
                                        violation: Some(CancellationViolation {
                                            a: Word::from(&m[..i]),
                                            x: Word::from(&m[i..n - j]),
                                            y: Word::from(y),
                                            b: Word::from(&m[n - j..]),
                                        }),
                                    });
                                }
                                Some(_) => {}
                            }
                        }
                    }
                }
            }
        }
        Ok(CancellationReport { max_len, checked, violation: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bii() -> Monoid {
        Monoid::parse("generators: a b c\nrelation: c b b = b b a\nrelation: a b = b c\nrelation: a c = c a\n").unwrap()
    }

    // Independent oracle: closure by repeated full rewriting passes over a
    // growing set, with no queue and no memo.
    fn closure_oracle(m: &Monoid, w: &Word) -> Vec<Word> {
        let mut set: std::collections::BTreeSet<Word> = [w.clone()].into();
        loop {
            let mut next = set.clone();
            for x in &set {
                for r in m.presentation().relations() {
                    for (a, b) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
                        for i in 0..x.len() {
                            if x[i..].starts_with(a) {
                                let mut y = x.letters().to_vec();
                                y[i..i + b.len()].copy_from_slice(b);
                                next.insert(Word::new(y));
                            }
                        }
                    }
                }
            }
            if next.len() == set.len() {
                return set.into_iter().collect();
            }
            set = next;
        }
    }

    #[test]
    fn class_matches_closure_oracle_on_short_words() {
        let m = bii();
        for n in 0..=5 {
            for w in all_words(3, n) {
                let c = m.enumerate_class(&w).unwrap();
                assert_eq!(c.members(), closure_oracle(&m, &w).as_slice(), "class of {}", m.fmt(&w));
            }
        }
    }

    #[test]
    fn delta_one_spellings_share_a_class() {
        let m = bii();
        let c = m.enumerate_class(&m.word("bcbcbc").unwrap()).unwrap();
        for s in ["bbcbac", "cbabba", "acbabb"] {
            assert!(c.contains(&m.word(s).unwrap()), "{s}");
        }
    }

    #[test]
    fn neighbors_are_sorted_and_symmetric() {
        let m = bii();
        let w = m.word("abb").unwrap();
        let ns = m.elementary_neighbors(&w);
        assert_eq!(ns, vec![m.word("bcb").unwrap()]);
        for n in &ns {
            assert!(m.elementary_neighbors(n).contains(&w));
        }
    }

    #[test]
    fn length_two_classes_of_bii() {
        let m = bii();
        let cs = m.all_classes(2).unwrap();
        // ab=bc and ac=ca merge two pairs among the nine words.
        assert_eq!(cs.len(), 7);
        let total: usize = cs.iter().map(|c| c.size()).sum();
        assert_eq!(total, 9);
    }

    #[test]
    fn ceiling_is_enforced() {
        let m = bii().with_ceiling(3);
        let err = m.enumerate_class(&m.word("bcbcbc").unwrap()).unwrap_err();
        assert!(matches!(err, Error::CeilingExceeded { ceiling: 3 }));
    }

    #[test]
    fn words_equal_uses_invariants_and_classes() {
        let m = bii();
        assert!(m.words_equal(&m.word("ab").unwrap(), &m.word("bc").unwrap()).unwrap());
        assert!(!m.words_equal(&m.word("ab").unwrap(), &m.word("ac").unwrap()).unwrap());
        assert!(!m.words_equal(&m.word("ab").unwrap(), &m.word("abc").unwrap()).unwrap());
        assert!(m.words_equal(&[], &[]).unwrap());
    }

    #[test]
    fn empty_word_is_its_own_class() {
        let m = bii();
        let c = m.enumerate_class(&[]).unwrap();
        assert_eq!(c.size(), 1);
        assert!(c.canonical().is_empty());
    }

    #[test]
    fn cache_limit_zero_disables_memo() {
        let m = bii().with_cache_limit(0);
        m.enumerate_class(&m.word("bcbcbc").unwrap()).unwrap();
        assert!(m.cached_classes().is_empty());
    }

    #[test]
    fn cancellation_probe_finds_left_cancellation_failure() {
        let m = Monoid::parse("generators: a b c\nrelation: a b = a c\n").unwrap();
        let v = m.cancellation_probe(2).unwrap().violation.unwrap();
        assert_eq!((v.a.len(), v.b.len()), (1, 0));
        assert_ne!(v.x, v.y);
        assert!(m.cancellation_probe(1).unwrap().violation.is_none());
    }

    #[test]
    fn cancellation_probe_passes_on_bii() {
        let r = bii().cancellation_probe(5).unwrap();
        assert!(r.violation.is_none());
        assert!(r.checked > 0);
    }

    #[test]
    fn cache_roundtrip_and_rejects_open_blocks() {
        let m = bii();
        m.classes_up_to(4).unwrap();
        let mut buf = Vec::new();
        let saved = m.save_cache(&mut buf).unwrap();
        let fresh = bii();
        assert_eq!(fresh.load_cache(std::str::from_utf8(&buf).unwrap()).unwrap(), saved);
        assert_eq!(fresh.cached_classes(), m.cached_classes());

        let err = bii().load_cache("class-begin\na b\nclass-end\n").unwrap_err();
        assert!(matches!(err, Error::Cache(_)));
        assert!(bii().load_cache("class-begin\na\n").is_err());
    }
}
