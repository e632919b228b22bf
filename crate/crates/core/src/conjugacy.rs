//! Conjugacy in the monoid and, through a fundamental element, in its group
//! of fractions.
//!
//! `V` is a conjugate of `w` when `A·V ≐ w·A` for some `A`; such an `A ≠ ε`
//! is a transit element of `w`. Conjugates are computed in three ways: a
//! brute-force search over conjugators up to a length bound, a chained search
//! through minimal transit elements, and the orbit of `w` under divisors of
//! a fundamental element.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::divisibility::{shortlex, Bounded};
use crate::engine::{EquivClass, Monoid};
use crate::error::{Error, Result};
use crate::garside::FundamentalCert;
use crate::presentation::GroupLetter;
use crate::word::{Letter, Word};

/// Minimal transit sets keyed by canonical word, with the length bound
/// each was computed at.
pub type TransitCache = FxHashMap<Word, (usize, Vec<Transit>)>;

/// A transit element `A` of some `w` together with the conjugate `V`
/// (canonical) it leads to: `A·V ≐ w·A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transit {
    pub element: Word,
    pub target: Word,
}

/// One element of an orbit with the conjugator that reaches it from the seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEntry {
    /// Canonical word of the conjugate `V`.
    pub element: Word,
    /// `A` with `A·V ≐ seed·A`.
    pub conjugator: Word,
    /// Divisors of Δ whose product is the conjugator, in order.
    pub chain: Vec<Word>,
}

/// The orbit of a word under conjugation by divisors of Δ, iterated until
/// it stops growing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitState {
    pub seed: Word,
    pub delta: Word,
    /// `levels[k]` is the set after `k + 1` rounds, as canonical words.
    pub levels: Vec<Vec<Word>>,
    /// Number of rounds after which the set stopped changing.
    pub stabilized_at: usize,
    pub entries: Vec<OrbitEntry>,
}

impl OrbitState {
    pub fn members(&self) -> &[Word] {
        self.levels.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn entry(&self, canonical: &Word) -> Option<&OrbitEntry> {
        self.entries.iter().find(|e| &e.element == canonical)
    }
}

/// Why a conjugacy query was answered "no".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoReason {
    /// Length or a conserved letter count differs.
    Invariant,
    /// The orbit is all of the conjugacy set because property P holds.
    PropertyP,
    /// Closure under an exact table of minimal transit elements.
    ExactTable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjVerdict {
    /// `A·v ≐ u·A` for the given conjugator.
    Yes { conjugator: Word },
    No { reason: NoReason },
    /// Not in the orbit, and nothing certifies that the orbit is complete.
    NotFoundInOrbit,
    /// Not found among conjugators up to the bound.
    Inconclusive { bound: usize },
}

impl ConjVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, ConjVerdict::Yes { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// Every minimal transit element up to the bound left-divides Δ.
    Confirmed { bound: usize, minimal_transits: Vec<Word> },
    /// A minimal transit element that does not left-divide Δ.
    Counterexample { transit: Word },
}

impl ProbeOutcome {
    pub fn confirmed(&self) -> bool {
        matches!(self, ProbeOutcome::Confirmed { .. })
    }
}

/// A group element written `Λ^(-k)·p` with `Λ` the central power of Δ and
/// `p` positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupNormal {
    pub lambda_exponent: usize,
    pub positive: Word,
}

impl Monoid {
    /// If `a` is a transit element of `w`, some spelling of the conjugate `V`
    /// with `a·V ≐ w·a`.
    pub fn transit_target(&self, w: &[Letter], a: &[Letter]) -> Result<Option<Word>> {
        let wa = Word::from(w).cat(a);
        self.left_quotient(a, &wa)
    }

    fn transit_target_in(&self, w: &[Letter], a: &EquivClass) -> Result<Option<Word>> {
        let wa = Word::from(w).cat(a.canonical());
        let class = self.enumerate_uncached(&wa)?;
        let n = a.word_len();
        Ok(class.members().iter().find(|m| a.contains(&m[..n])).map(|m| m.suffix_from(n)))
    }

    /// All transit elements of `w` of length at most `bound`, by scanning
    /// every class up to that length. Exponential in `bound`; meant as an
    /// oracle for small bounds.
    pub fn transit_elements_bounded(&self, w: &[Letter], bound: usize) -> Result<Bounded<Vec<Transit>>> {
        let mut out = Vec::new();
        for len in 1..=bound {
            let mut hits = Vec::new();
            self.for_each_class(len, |c| {
                if let Some(v) = self.transit_target_in(w, &c)? {
                    hits.push((c.canonical().clone(), v));
                }
                Ok(())
            })?;
            for (a, v) in hits {
                out.push(Transit { element: a, target: self.canonical(&v)? });
            }
        }
        Ok(Bounded { value: out, bound })
    }

    /// Minimal transit elements of `w` (no proper left divisor is a transit
    /// element) of length at most `bound`, ordered by length and then
    /// lexicographically.
    ///
    /// The search only extends elements none of whose left divisors is a
    /// transit element, which is where minimal ones can appear.
    pub fn trans_min_bounded(&self, w: &[Letter], bound: usize) -> Result<Bounded<Vec<Transit>>> {
        let mut out = Vec::new();
        // Members of every class in the current level of the frontier.
        let mut frontier_words: FxHashSet<Word> = FxHashSet::default();
        frontier_words.insert(Word::empty());
        let mut frontier: Vec<Word> = vec![Word::empty()];
        for len in 1..=bound {
            if frontier.is_empty() {
                break;
            }
            let mut seen: FxHashSet<Word> = FxHashSet::default();
            let mut next_words: FxHashSet<Word> = FxHashSet::default();
            let mut next = Vec::new();
            let mut hits = Vec::new();
            for c in &frontier {
                for x in self.atoms() {
                    let cand = c.cat(&[x]);
                    if seen.contains(&cand) {
                        continue;
                    }
                    let class = self.enumerate_uncached(&cand)?;
                    seen.extend(class.members().iter().cloned());
                    if !class.members().iter().all(|m| frontier_words.contains(&m[..len - 1])) {
                        continue;
                    }
                    match self.transit_target_in(w, &class)? {
                        Some(v) => hits.push((class.canonical().clone(), v)),
                        None => {
                            next_words.extend(class.members().iter().cloned());
                            next.push(class.canonical().clone());
                        }
                    }
                }
            }
            hits.sort();
            for (a, v) in hits {
                out.push(Transit { element: a, target: self.canonical(&v)? });
            }
            frontier = next;
            frontier_words = next_words;
        }
        Ok(Bounded { value: out, bound })
    }

    /// Conjugates `V` of `w` reached by some conjugator `A` with
    /// `1 ≤ |A| ≤ bound`, plus `w` itself. Scans every class up to the bound,
    /// so it is exact for any presentation and exponential in `bound`.
    pub fn conj_oracle_bounded(&self, w: &[Letter], bound: usize) -> Result<Bounded<Vec<Word>>> {
        let mut set: FxHashSet<Word> = FxHashSet::default();
        set.insert(self.canonical(w)?);
        for t in self.transit_elements_bounded(w, bound)?.value {
            set.insert(t.target);
        }
        let mut value: Vec<Word> = set.into_iter().collect();
        value.sort();
        Ok(Bounded { value, bound })
    }

    /// The same set as [`Monoid::conj_oracle_bounded`] for a left-cancellative
    /// monoid, computed by chaining minimal transit elements.
    ///
    /// If `A·V ≐ w·A` and `δ` is a minimal transit element dividing `A` on the
    /// left, with `δ·Q ≐ w·δ`, then left cancellation turns `A = δ·A'` into
    /// `A'·V ≐ Q·A'`. So conjugators of length at most `bound` are exactly
    /// chains of minimal transit elements with total length at most `bound`.
    pub fn conj_oracle_cancellative(&self, w: &[Letter], bound: usize) -> Result<Bounded<Vec<Word>>> {
        let mut trans_cache = TransitCache::default();
        self.conj_oracle_cancellative_with(w, bound, &mut trans_cache)
    }

    /// [`Monoid::conj_oracle_cancellative`] sharing minimal transit sets
    /// between calls.
    pub fn conj_oracle_cancellative_with(
        &self,
        w: &[Letter],
        bound: usize,
        trans_cache: &mut TransitCache,
    ) -> Result<Bounded<Vec<Word>>> {
        let start = self.canonical(w)?;
        let mut best: FxHashMap<Word, usize> = FxHashMap::default();
        best.insert(start.clone(), 0);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0usize, start)));
        while let Some(Reverse((used, q))) = heap.pop() {
            if best.get(&q).is_some_and(|&b| b < used) {
                continue;
            }
            let budget = bound - used;
            if budget == 0 {
                continue;
            }
            let stale = trans_cache.get(&q).is_none_or(|(b, _)| *b < budget);
            if stale {
                let ts = self.trans_min_bounded(&q, budget)?.value;
                trans_cache.insert(q.clone(), (budget, ts));
            }
            let ts = trans_cache[&q].1.clone();
            for t in ts.iter().filter(|t| t.element.len() <= budget) {
                let nu = used + t.element.len();
                if best.get(&t.target).is_none_or(|&b| nu < b) {
                    best.insert(t.target.clone(), nu);
                    heap.push(Reverse((nu, t.target.clone())));
                }
            }
        }
        let mut value: Vec<Word> = best.into_keys().collect();
        value.sort();
        Ok(Bounded { value, bound })
    }

    /// One round of the orbit: `current` together with every `V` such that
    /// `A·V ≐ U·A` for some `U` in `current` and non-trivial left divisor `A`
    /// of Δ.
    pub fn orbit_step(&self, current: &[Word], delta: &[Letter]) -> Result<Vec<Word>> {
        let divisors = self.left_divisor_set(delta)?.divisors;
        let mut out: FxHashSet<Word> = FxHashSet::default();
        for u in current {
            out.insert(self.canonical(u)?);
            for a in divisors.iter().filter(|a| !a.is_empty()) {
                if let Some(v) = self.transit_target(u, a)? {
                    out.insert(self.canonical(&v)?);
                }
            }
        }
        let mut v: Vec<Word> = out.into_iter().collect();
        v.sort();
        Ok(v)
    }

    /// Iterates [`Monoid::orbit_step`] from `w` until it stabilizes, recording
    /// for each element a conjugator built from divisors of Δ. `delta` must
    /// be fundamental.
    pub fn orbit_closure(&self, w: &[Letter], delta: &[Letter]) -> Result<OrbitState> {
        if !self.is_fundamental(delta)? {
            return Err(Error::Precondition(format!("{} is not fundamental", self.fmt(delta))));
        }
        let seed = self.canonical(w)?;
        let delta_c = self.canonical(delta)?;
        let divisors: Vec<Word> =
            self.left_divisor_set(&delta_c)?.divisors.into_iter().filter(|a| !a.is_empty()).collect();
        let mut entries = vec![OrbitEntry { element: seed.clone(), conjugator: Word::empty(), chain: Vec::new() }];
        let mut index: FxHashMap<Word, usize> = FxHashMap::default();
        index.insert(seed.clone(), 0);
        let mut levels = Vec::new();
        let mut frontier = vec![0usize];
        loop {
            let mut next_frontier = Vec::new();
            for &i in &frontier {
                let u = entries[i].element.clone();
                for a in &divisors {
                    let Some(v) = self.transit_target(&u, a)? else { continue };
                    let v = self.canonical(&v)?;
                    if index.contains_key(&v) {
                        continue;
                    }
                    let parent = &entries[i];
                    let mut chain = parent.chain.clone();
                    chain.push(a.clone());
                    let conjugator = parent.conjugator.cat(a);
                    index.insert(v.clone(), entries.len());
                    next_frontier.push(entries.len());
                    entries.push(OrbitEntry { element: v, conjugator, chain });
                }
            }
            let mut level: Vec<Word> = entries.iter().map(|e| e.element.clone()).collect();
            level.sort();
            levels.push(level);
            if next_frontier.is_empty() {
                break;
            }
            frontier = next_frontier;
        }
        let stabilized_at = levels.len();
        Ok(OrbitState { seed, delta: delta_c, levels, stabilized_at, entries })
    }

    /// Checks that every minimal transit element of `w` up to `bound`
    /// left-divides Δ.
    pub fn property_p_probe(&self, w: &[Letter], delta: &[Letter], bound: usize) -> Result<ProbeOutcome> {
        let ts = self.trans_min_bounded(w, bound)?.value;
        for t in &ts {
            if !self.is_divisor(crate::divisibility::Side::Left, &t.element, delta)? {
                return Ok(ProbeOutcome::Counterexample { transit: t.element.clone() });
            }
        }
        let mut minimal_transits: Vec<Word> = ts.into_iter().map(|t| t.element).collect();
        minimal_transits.sort_by(shortlex);
        Ok(ProbeOutcome::Confirmed { bound, minimal_transits })
    }

    /// Decides whether `v` is a conjugate of `u` (`A·v ≐ u·A`).
    ///
    /// With Δ the orbit of `u` is searched; a miss is a definitive "no" only
    /// when `p_certified` says property P holds along the orbit. Without Δ
    /// conjugators up to `bound` are searched by brute force.
    pub fn are_conjugate(
        &self,
        u: &[Letter],
        v: &[Letter],
        delta: Option<&[Letter]>,
        p_certified: bool,
        bound: usize,
    ) -> Result<ConjVerdict> {
        if !self.same_conserved_counts(u, v) {
            return Ok(ConjVerdict::No { reason: NoReason::Invariant });
        }
        let vc = self.canonical(v)?;
        if self.canonical(u)? == vc {
            return Ok(ConjVerdict::Yes { conjugator: Word::empty() });
        }
        match delta {
            Some(d) => {
                let orbit = self.orbit_closure(u, d)?;
                match orbit.entry(&vc) {
                    Some(e) => Ok(ConjVerdict::Yes { conjugator: e.conjugator.clone() }),
                    None if p_certified => Ok(ConjVerdict::No { reason: NoReason::PropertyP }),
                    None => Ok(ConjVerdict::NotFoundInOrbit),
                }
            }
            None => {
                for t in self.transit_elements_bounded(u, bound)?.value {
                    if t.target == vc {
                        return Ok(ConjVerdict::Yes { conjugator: t.element });
                    }
                }
                Ok(ConjVerdict::Inconclusive { bound })
            }
        }
    }

    /// Rewrites a group word as `Λ^(-k)·p`: each `s^-1` becomes
    /// `Δ_s·Δ^(ord-1)·Λ^(-1)` and the central `Λ^(-1)` factors are collected.
    pub fn group_normalize(&self, g: &[GroupLetter], cert: &FundamentalCert) -> Result<GroupNormal> {
        let ord = cert.qz.order();
        let tail = cert.element().pow(ord - 1);
        let mut positive = Word::empty();
        let mut k = 0;
        for &(x, inv) in g {
            if inv {
                positive = positive.cat(&cert.quotients[x as usize]).cat(&tail);
                k += 1;
            } else {
                positive.push(x);
            }
        }
        Ok(GroupNormal { lambda_exponent: k, positive })
    }

    /// Equality in the group of fractions: `Λ^(k2)·p1 ≐ Λ^(k1)·p2`.
    pub fn group_equal(&self, g1: &[GroupLetter], g2: &[GroupLetter], cert: &FundamentalCert) -> Result<bool> {
        let (l, r) = self.group_to_positive_pair(g1, g2, cert)?;
        self.words_equal(&l, &r)
    }

    /// Conjugacy in the group of fractions, reduced to monoid conjugacy of
    /// `Λ^(k2)·p1` and `Λ^(k1)·p2` (Λ is central).
    pub fn group_conjugate(
        &self,
        g1: &[GroupLetter],
        g2: &[GroupLetter],
        cert: &FundamentalCert,
        p_certified: bool,
    ) -> Result<ConjVerdict> {
        let (l, r) = self.group_to_positive_pair(g1, g2, cert)?;
        self.are_conjugate(&l, &r, Some(cert.element()), p_certified, 0)
    }

    fn group_to_positive_pair(
        &self,
        g1: &[GroupLetter],
        g2: &[GroupLetter],
        cert: &FundamentalCert,
    ) -> Result<(Word, Word)> {
        let n1 = self.group_normalize(g1, cert)?;
        let n2 = self.group_normalize(g2, cert)?;
        let lambda = cert.element().pow(cert.qz.order());
        Ok((lambda.pow(n2.lambda_exponent).cat(&n1.positive), lambda.pow(n1.lambda_exponent).cat(&n2.positive)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisibility::Side;
    use crate::word::all_words;

    fn bii() -> Monoid {
        Monoid::parse("generators: a b c\nrelation: c b b = b b a\nrelation: a b = b c\nrelation: a c = c a\n").unwrap()
    }

    fn g22() -> Monoid {
        crate::gmn::gmn_monoid(2, 2).unwrap()
    }

    // Oracle: filter the brute-force transit list down to elements with no
    // transit proper left divisor.
    fn minimal_oracle(m: &Monoid, w: &Word, bound: usize) -> Vec<Transit> {
        let all = m.transit_elements_bounded(w, bound).unwrap().value;
        let mut out: Vec<Transit> = all
            .iter()
            .filter(|t| {
                !all.iter().any(|o| {
                    o.element.len() < t.element.len() && m.is_divisor(Side::Left, &o.element, &t.element).unwrap()
                })
            })
            .cloned()
            .collect();
        out.sort_by(|a, b| shortlex(&a.element, &b.element));
        out
    }

    #[test]
    fn pruned_minimal_transit_search_matches_filtered_brute_force() {
        let m = bii();
        for n in 0..=3 {
            for w in all_words(3, n) {
                assert_eq!(m.trans_min_bounded(&w, 5).unwrap().value, minimal_oracle(&m, &w, 5), "{}", m.fmt(&w));
            }
        }
        let g = g22();
        for n in 1..=2 {
            for w in all_words(5, n) {
                assert_eq!(g.trans_min_bounded(&w, 4).unwrap().value, minimal_oracle(&g, &w, 4), "{}", g.fmt(&w));
            }
        }
    }

    #[test]
    fn chained_oracle_matches_brute_force() {
        let m = bii();
        for n in 1..=3 {
            for w in all_words(3, n) {
                assert_eq!(
                    m.conj_oracle_cancellative(&w, 6).unwrap().value,
                    m.conj_oracle_bounded(&w, 6).unwrap().value,
                    "{}",
                    m.fmt(&w)
                );
            }
        }
        let g = g22();
        for w in all_words(5, 2) {
            assert_eq!(g.conj_oracle_cancellative(&w, 5).unwrap().value, g.conj_oracle_bounded(&w, 5).unwrap().value);
        }
    }

    #[test]
    fn transit_targets_satisfy_the_equation() {
        let m = bii();
        let w = m.word("ab").unwrap();
        for t in m.transit_elements_bounded(&w, 4).unwrap().value {
            assert!(m.words_equal(&t.element.cat(&t.target), &w.cat(&t.element)).unwrap());
        }
    }

    #[test]
    fn orbit_of_a_under_bcbcbc() {
        let m = bii();
        let delta = m.word("bcbcbc").unwrap();
        let orbit = m.orbit_closure(&m.word("a").unwrap(), &delta).unwrap();
        let names: Vec<String> = orbit.members().iter().map(|w| m.fmt(w)).collect();
        assert_eq!(names, ["a", "c"]);
        for e in &orbit.entries {
            assert!(m.words_equal(&e.conjugator.cat(&e.element), &orbit.seed.cat(&e.conjugator)).unwrap());
            assert_eq!(Word::concat(e.chain.iter()), e.conjugator);
        }
    }

    #[test]
    fn orbit_requires_a_fundamental_element() {
        let m = bii();
        let err = m.orbit_closure(&m.word("a").unwrap(), &m.word("bbb").unwrap()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn orbit_step_only_grows() {
        let m = bii();
        let delta = m.word("bcbcbc").unwrap();
        for w in all_words(3, 3) {
            let start = vec![m.canonical(&w).unwrap()];
            let one = m.orbit_step(&start, &delta).unwrap();
            let two = m.orbit_step(&one, &delta).unwrap();
            assert!(start.iter().all(|x| one.contains(x)));
            assert!(one.iter().all(|x| two.contains(x)));
        }
    }

    #[test]
    fn orbit_is_inside_bounded_oracle() {
        let m = bii();
        let delta = m.word("bcbcbc").unwrap();
        for n in 1..=3 {
            for w in all_words(3, n) {
                let orbit = m.orbit_closure(&w, &delta).unwrap();
                let longest = orbit.entries.iter().map(|e| e.conjugator.len()).max().unwrap();
                let oracle = m.conj_oracle_cancellative(&w, longest).unwrap().value;
                for x in orbit.members() {
                    assert!(oracle.contains(x), "{} not in oracle of {}", m.fmt(x), m.fmt(&w));
                }
            }
        }
    }

    #[test]
    fn probe_finds_transits_outside_bbb() {
        let m = bii();
        // bbb is central, so every letter is a transit element of every word,
        // and a and c do not divide bbb.
        let out = m.property_p_probe(&m.word("a").unwrap(), &m.word("bbb").unwrap(), 3).unwrap();
        assert_eq!(out, ProbeOutcome::Counterexample { transit: m.word("a").unwrap() });
        let ok = m.property_p_probe(&m.word("a").unwrap(), &m.word("bcbcbc").unwrap(), 5).unwrap();
        assert!(ok.confirmed());
    }

    #[test]
    fn invariant_mismatch_is_a_definitive_no() {
        let m = bii();
        let v = m.are_conjugate(&m.word("ab").unwrap(), &m.word("ac").unwrap(), None, false, 4).unwrap();
        assert_eq!(v, ConjVerdict::No { reason: NoReason::Invariant });
    }

    #[test]
    fn brute_force_conjugacy_reports_bound() {
        let m = bii();
        let yes = m.are_conjugate(&m.word("a").unwrap(), &m.word("c").unwrap(), None, false, 4).unwrap();
        let ConjVerdict::Yes { conjugator } = yes else { panic!("{yes:?}") };
        assert!(m.words_equal(&conjugator.cat(&m.word("c").unwrap()), &m.word("a").unwrap().cat(&conjugator)).unwrap());
        let unknown = m.are_conjugate(&m.word("aab").unwrap(), &m.word("bcc").unwrap(), None, false, 2).unwrap();
        assert!(matches!(unknown, ConjVerdict::Inconclusive { bound: 2 } | ConjVerdict::Yes { .. }));
    }

    #[test]
    fn group_bridge_in_bii() {
        let m = bii();
        let p = m.presentation();
        let cert = m.fundamental_cert(&m.word("bcbcbc").unwrap()).unwrap().unwrap();
        let g = |s: &str| p.parse_group_word(s).unwrap();
        assert!(m.group_equal(&g("b b^-1"), &g("e"), &cert).unwrap());
        assert!(m.group_equal(&g("a^-1 a c"), &g("c"), &cert).unwrap());
        assert!(!m.group_equal(&g("a"), &g("c"), &cert).unwrap());
        let n = m.group_normalize(&g("b^-1"), &cert).unwrap();
        assert_eq!(n.lambda_exponent, 1);
        assert!(m.group_conjugate(&g("b^-1 a b"), &g("a"), &cert, false).unwrap().is_yes());
    }
}
