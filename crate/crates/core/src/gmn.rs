//! The family G_{m,n}: generators `s, t1..tm, u1..un`; every rotation of
//! `s t1..tm` and of `s u1..un` is equal, and each `t_i` commutes with each
//! `u_j`.
//!
//! Every relation preserves every letter count, so `Δ = s t1..tm u1..un` is
//! central. Elements without a spelling containing `Δ_1 = s t1..tm` or
//! `Δ_2 = s u1..un` as a factor only move by the commutators, which gives
//! them a block normal form. Conjugacy is decided by the orbit under
//! divisors of Δ, made definitive by certifying property P on each member.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::conjugacy::{ConjVerdict, NoReason, OrbitState};
use crate::divisibility::Side;
use crate::engine::{EquivClass, Monoid};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

pub const S: Letter = 0;

/// Presentation of G_{m,n}: all rotations of `s t1..tm` and of `s u1..un`
/// are equal, and every `t_i` commutes with every `u_j`.
pub fn gmn_presentation(m: usize, n: usize) -> Result<Presentation> {
    if m < 2 || n < 2 {
        return Err(Error::Precondition("G_{m,n} needs m, n >= 2".into()));
    }
    let mut names = vec!["s".to_string()];
    names.extend((1..=m).map(|i| format!("t{i}")));
    names.extend((1..=n).map(|j| format!("u{j}")));
    let mut text = format!("generators: {}\n", names.join(" "));
    for block in [&names[1..=m], &names[m + 1..]] {
        let mut cycle = vec!["s".to_string()];
        cycle.extend(block.iter().cloned());
        for r in 1..cycle.len() {
            let rot: Vec<String> = cycle[r..].iter().chain(cycle[..r].iter()).cloned().collect();
            text.push_str(&format!("relation: {} = {}\n", cycle.join(" "), rot.join(" ")));
        }
    }
    for t in &names[1..=m] {
        for u in &names[m + 1..] {
            text.push_str(&format!("relation: {t} {u} = {u} {t}\n"));
        }
    }
    Presentation::parse(&text)
}

pub fn gmn_monoid(m: usize, n: usize) -> Result<Monoid> {
    Ok(Monoid::new(gmn_presentation(m, n)?))
}

/// The t letters (`T`, index 1) or the u letters (`U`, index 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    T,
    U,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::T => Part::U,
            Part::U => Part::T,
        }
    }

    fn index(self) -> usize {
        match self {
            Part::T => 0,
            Part::U => 1,
        }
    }
}

/// `w ≐ w_0(t) w_0(u) s w_1(t) w_1(u) s … s w_N(t) w_N(u)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GmnNormalForm {
    /// `(w_i(t), w_i(u))` for `i = 0..=N`.
    pub blocks: Vec<(Word, Word)>,
}

impl GmnNormalForm {
    /// Number of s letters.
    pub fn n_s(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, i: usize, part: Part) -> &Word {
        match part {
            Part::T => &self.blocks[i].0,
            Part::U => &self.blocks[i].1,
        }
    }

    pub fn last(&self, part: Part) -> &Word {
        self.block(self.n_s(), part)
    }

    /// `w_{N-1}` of the given part, if there is an s.
    pub fn before_last(&self, part: Part) -> Option<&Word> {
        (self.n_s() > 0).then(|| self.block(self.n_s() - 1, part))
    }

    pub fn word(&self) -> Word {
        let mut v = Vec::new();
        for (i, (t, u)) in self.blocks.iter().enumerate() {
            if i > 0 {
                v.push(S);
            }
            v.extend_from_slice(t);
            v.extend_from_slice(u);
        }
        Word::new(v)
    }
}

/// The greedy extraction `w ≐ Δ^k · w_remain` and
/// `w_remain ≐ (Δ_1^λ1 or Δ_2^λ2) · Δ_{1,s}^μ1 · Δ_{2,s}^μ2 · w'_remain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strata {
    pub k: usize,
    pub lambda: [usize; 2],
    pub mu: [usize; 2],
    pub remain: Word,
    pub remain_prime: Word,
}

/// The right lcm description of a letter and an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McmFormula {
    /// A single minimal common multiple.
    Single(Word),
    /// `{ head · w' · tail : w' a word in the letters of `free` not
    /// right-divisible by their full block }`.
    Family { head: Word, free: Part, tail: Word },
}

/// A verified witness: a transit element of `w` that left-divides Δ,
/// produced by the branch for transit elements with first letter `letter`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PWitness {
    pub letter: Letter,
    pub element: Word,
    pub rule: &'static str,
}

/// What the case analysis saw for `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PTrace {
    pub strata: Strata,
    /// Letters left-dividing `w`.
    pub left_letters: Vec<Letter>,
    /// `k>0`, `empty`, `delta{1,2}-{pure,with-s}` when a Δ_i power leads,
    /// else which letters left-divide the rest (`one-t`, `all-t-one-u`, ...).
    pub case: String,
    /// The element whose normal form drove the formulas, and that form.
    pub form_source: Word,
    pub normal_form: Option<GmnNormalForm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyPReport {
    pub trace: PTrace,
    /// Verified witnesses, none left-divisible by another.
    pub witnesses: Vec<PWitness>,
    /// Single-branch formula outputs that failed verification.
    pub rejected: Vec<(Word, &'static str)>,
    /// Transit elements dividing Δ with no witness as a left divisor.
    pub uncovered: Vec<Word>,
}

impl PropertyPReport {
    /// Every transit divisor of Δ is left-divisible by a witness and every
    /// branch formula verified.
    pub fn holds(&self) -> bool {
        self.uncovered.is_empty() && self.rejected.is_empty()
    }

    /// Canonical witness elements, deduplicated.
    pub fn elements(&self) -> Vec<Word> {
        let mut v: Vec<Word> = self.witnesses.iter().map(|w| w.element.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// A candidate witness before verification. `exact` marks single-branch
/// formulas, whose failure is reported; family members may legitimately
/// fail.
struct Proposal {
    letter: Letter,
    element: Word,
    rule: &'static str,
    exact: bool,
}

/// Which part of the reduction lemma an equation `v·X ≐ p·Y` falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GmnLemmaCase {
    /// `p = v`.
    Cancel,
    /// `t_i X ≐ u_j Y` or the mirror: `X ≐ u_j Z`, `Y ≐ t_i Z`.
    Commute,
    /// `s X ≐ w(t) Y` or `s X ≐ w(u) Y`.
    SAgainstPure,
    /// `t_i X ≐ w(t) Y` with `t_i ∤ w(t)`, or the u mirror.
    LetterAgainstPure,
}

/// `X ≐ x_prefix · Z` and `Y ≐ y_prefix · Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GmnReduction {
    pub case: GmnLemmaCase,
    pub x_prefix: Word,
    pub y_prefix: Word,
    pub z: Word,
}

/// Image of an element in `F_m × Z` (t letters kept, u letters killed,
/// `s ↦ z·(t1..tm)^-1`) and in the u analog, up to conjugacy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeInvariant {
    pub z: usize,
    /// Cyclically reduced free words at their least rotation; letters are
    /// signed 1-based indices.
    pub t_image: Vec<i16>,
    pub u_image: Vec<i16>,
}

/// G_{m,n} with its specialized procedures.
pub struct Gmn {
    m: usize,
    n: usize,
    monoid: Monoid,
    delta: Word,
    delta_parts: [Word; 2],
    delta_part_classes: [Arc<EquivClass>; 2],
    /// Nonempty left divisors of Δ, canonical.
    divisors: Vec<Word>,
}

impl Gmn {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        let monoid = gmn_monoid(m, n)?;
        let block_t: Vec<Letter> = (1..=m as Letter).collect();
        let block_u: Vec<Letter> = (m as Letter + 1..=(m + n) as Letter).collect();
        let delta = Word::new([vec![S], block_t.clone(), block_u.clone()].concat());
        let d1 = Word::new([vec![S], block_t].concat());
        let d2 = Word::new([vec![S], block_u].concat());
        let c1 = monoid.enumerate_class(&d1)?;
        let c2 = monoid.enumerate_class(&d2)?;
        let divisors = monoid.left_divisor_set(&delta)?.divisors.into_iter().filter(|d| !d.is_empty()).collect();
        Ok(Gmn { m, n, monoid, delta, delta_parts: [d1, d2], delta_part_classes: [c1, c2], divisors })
    }

    pub fn with_ceiling(self, ceiling: usize) -> Self {
        Gmn { monoid: self.monoid.with_ceiling(ceiling), ..self }
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> &Word {
        &self.delta
    }

    /// `Δ_1` or `Δ_2`.
    pub fn delta_part(&self, part: Part) -> &Word {
        &self.delta_parts[part.index()]
    }

    pub fn t(&self, i: usize) -> Letter {
        assert!((1..=self.m).contains(&i));
        i as Letter
    }

    pub fn u(&self, j: usize) -> Letter {
        assert!((1..=self.n).contains(&j));
        (self.m + j) as Letter
    }

    pub fn part_of(&self, x: Letter) -> Option<Part> {
        match x as usize {
            0 => None,
            i if i <= self.m => Some(Part::T),
            _ => Some(Part::U),
        }
    }

    pub fn letters(&self, part: Part) -> Vec<Letter> {
        match part {
            Part::T => (1..=self.m as Letter).collect(),
            Part::U => (self.m as Letter + 1..=(self.m + self.n) as Letter).collect(),
        }
    }

    /// `t1..tm` or `u1..un`.
    pub fn block(&self, part: Part) -> Word {
        Word::new(self.letters(part))
    }

    fn is_pure(&self, part: Part, w: &[Letter]) -> bool {
        w.iter().all(|&x| self.part_of(x) == Some(part))
    }

    fn try_quotient(&self, part: Part, v: &[Letter]) -> Result<Option<Word>> {
        match self.monoid.left_quotient(v, self.delta_part(part))? {
            Some(q) => Ok(Some(self.monoid.canonical(&q)?)),
            None => Ok(None),
        }
    }

    /// `Δ_{i,v}`: the quotient with `Δ_i ≐ v·Δ_{i,v}`.
    pub fn delta_quotient(&self, part: Part, v: &[Letter]) -> Result<Word> {
        self.try_quotient(part, v)?.ok_or_else(|| {
            Error::Precondition(format!(
                "{} does not left-divide {}",
                self.monoid.fmt(v),
                self.monoid.fmt(self.delta_part(part))
            ))
        })
    }

    /// `(R_i(w), C_i(w))`: `C_i` is the longest suffix of consecutive
    /// increasing letters and `w = R_i · C_i`.
    pub fn consec_divisor(&self, part: Part, w: &[Letter]) -> Result<(Word, Word)> {
        if w.is_empty() {
            return Err(Error::Precondition("C_i is undefined on the empty word".into()));
        }
        if !self.is_pure(part, w) {
            return Err(Error::Precondition(format!("{} mixes letter families", self.monoid.fmt(w))));
        }
        let mut start = w.len() - 1;
        while start > 0 && w[start - 1] + 1 == w[start] {
            start -= 1;
        }
        Ok((Word::from(&w[..start]), Word::from(&w[start..])))
    }

    /// `(R̃_i(w·s), C̃_i(w·s))`: `C̃ = C_i(w)·s` when `C_i(w)` ends with the
    /// last letter of its family, otherwise `s`; `w·s = R̃ · C̃`.
    pub fn tilde_c(&self, part: Part, w: &[Letter]) -> Result<(Word, Word)> {
        if w.is_empty() {
            return Ok((Word::empty(), Word::letter(S)));
        }
        let (r, c) = self.consec_divisor(part, w)?;
        let last = *self.letters(part).last().expect("families are nonempty");
        if c.last() == Some(last) {
            Ok((r, c.cat(&[S])))
        } else {
            Ok((Word::from(w), Word::letter(S)))
        }
    }

    /// Whether no spelling of `w` contains `Δ_1` or `Δ_2` as a factor.
    pub fn in_w(&self, w: &[Letter]) -> Result<bool> {
        let class = self.monoid.enumerate_class(w)?;
        for mem in class.members() {
            for c in &self.delta_part_classes {
                if mem.windows(c.word_len()).any(|win| c.contains(win)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The block normal form of an element of W_{m,n}.
    pub fn normal_form(&self, w: &[Letter]) -> Result<GmnNormalForm> {
        if !self.in_w(w)? {
            return Err(Error::Precondition(format!("{} is not in W_(m,n)", self.monoid.fmt(w))));
        }
        let blocks: Vec<(Word, Word)> = w
            .split(|&x| x == S)
            .map(|seg| {
                let t: Vec<Letter> = seg.iter().copied().filter(|&x| self.part_of(x) == Some(Part::T)).collect();
                let u: Vec<Letter> = seg.iter().copied().filter(|&x| self.part_of(x) == Some(Part::U)).collect();
                (Word::new(t), Word::new(u))
            })
            .collect();
        let nf = GmnNormalForm { blocks };
        if !self.monoid.words_equal(&nf.word(), w)? {
            return Err(Error::Verification(format!("block form of {} does not reassemble", self.monoid.fmt(w))));
        }
        Ok(nf)
    }

    /// Largest `k` with `d^k` left-dividing `w` (after `prefix`), and the
    /// quotient of `w` by `prefix · d^k`.
    fn max_power(&self, prefix: &[Letter], d: &[Letter], w: &[Letter]) -> Result<(usize, Word)> {
        let mut rest = match self.monoid.left_quotient(prefix, w)? {
            Some(q) => q,
            None => return Err(Error::Verification("prefix lost while extracting".into())),
        };
        let mut k = 0;
        while let Some(q) = self.monoid.left_quotient(d, &rest)? {
            k += 1;
            rest = q;
        }
        Ok((k, rest))
    }

    pub fn strata(&self, w: &[Letter]) -> Result<Strata> {
        let (k, remain) = self.max_power(&[], &self.delta, w)?;
        let (l1, _) = self.max_power(&[], &self.delta_parts[0], &remain)?;
        let (l2, _) = self.max_power(&[], &self.delta_parts[1], &remain)?;
        if l1 > 0 && l2 > 0 {
            return Err(Error::Verification(format!(
                "both Δ_1 and Δ_2 divide {}",
                self.monoid.fmt(&remain)
            )));
        }
        let d1s = self.block(Part::T);
        let d2s = self.block(Part::U);
        let (mu, remain_prime) = if l1 > 0 {
            let head = self.delta_parts[0].pow(l1);
            let (mu1, rest) = self.max_power(&head, &d1s, &remain)?;
            ([mu1, 0], rest)
        } else if l2 > 0 {
            let head = self.delta_parts[1].pow(l2);
            let (mu2, rest) = self.max_power(&head, &d2s, &remain)?;
            ([0, mu2], rest)
        } else {
            let (mu1, rest) = self.max_power(&[], &d1s, &remain)?;
            let (mu2, rest) = self.max_power(&[], &d2s, &rest)?;
            ([mu1, mu2], rest)
        };
        Ok(Strata { k, lambda: [l1, l2], mu, remain, remain_prime })
    }

    /// Letters that left-divide `w`.
    pub fn left_letters(&self, w: &[Letter]) -> Result<Vec<Letter>> {
        let class = self.monoid.enumerate_class(w)?;
        let mut v: Vec<Letter> = class.members().iter().filter_map(|m| m.first()).collect();
        v.sort();
        v.dedup();
        Ok(v)
    }

    /// The right lcm of a letter `x` and `w`, by the closed formulas.
    ///
    /// For `x` in a family `f`: `w ∈ W_{m,n}` must contain an s and `x ∤ w`.
    /// With `F_N` the last `f` block, the answer is the single element
    /// `w · Δ_{f, C̃_f(F_{N-1}·s)·F_N}` when `F_N` left-divides
    /// `Δ_{f, C̃_f(F_{N-1}·s)}`, otherwise the family
    /// `w · w' · Δ_{f, C_f(F_N)}`.
    ///
    /// For `x = s` the result describes `mcm({s, w·s})` and needs
    /// `w ∈ W_{m,n}`, `s ∤ w`, `w ≠ ε`.
    pub fn mcm_letter(&self, x: Letter, w: &[Letter]) -> Result<McmFormula> {
        let nf = self.normal_form(w)?;
        let w = Word::from(w);
        match self.part_of(x) {
            Some(f) => {
                if nf.n_s() == 0 {
                    return Err(Error::Precondition("w must contain s".into()));
                }
                if self.monoid.left_divides(&[x], &w)?.is_some() {
                    return Err(Error::Precondition("x must not divide w".into()));
                }
                let last = nf.last(f).clone();
                let (_, ct) = self.tilde_c(f, nf.before_last(f).expect("N >= 1"))?;
                let q = self.delta_quotient(f, &ct)?;
                if self.monoid.left_divides(&last, &q)?.is_some() {
                    let tail = self.delta_quotient(f, &ct.cat(&last))?;
                    return Ok(McmFormula::Single(self.monoid.canonical(&w.cat(&tail))?));
                }
                let (_, c) = self.consec_divisor(f, &last)?;
                Ok(McmFormula::Family { head: w, free: f.other(), tail: self.delta_quotient(f, &c)? })
            }
            None => {
                if w.is_empty() || self.monoid.left_divides(&[S], &w)?.is_some() {
                    return Err(Error::Precondition("w must be nonempty and s must not divide it".into()));
                }
                let ws = w.cat(&[S]);
                let (_, ct) = self.tilde_c(Part::T, nf.last(Part::T))?;
                let (_, cu) = self.tilde_c(Part::U, nf.last(Part::U))?;
                let qt = self.delta_quotient(Part::T, &ct)?;
                let qu = self.delta_quotient(Part::U, &cu)?;
                let tail = match (nf.blocks[0].0.is_empty(), nf.blocks[0].1.is_empty()) {
                    (false, true) => qt,
                    (true, false) => qu,
                    _ => qt.cat(&qu),
                };
                Ok(McmFormula::Single(self.monoid.canonical(&ws.cat(&tail))?))
            }
        }
    }

    /// Instances of an lcm description up to length `bound`, canonical.
    pub fn instantiate_mcm(&self, f: &McmFormula, bound: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        match f {
            McmFormula::Single(w) => {
                if w.len() <= bound {
                    out.push(w.clone());
                }
            }
            McmFormula::Family { head, free, tail } => {
                let letters = self.letters(*free);
                let block = self.block(*free);
                let room = bound.saturating_sub(head.len() + tail.len());
                let mut layer = vec![Word::empty()];
                for len in 0..=room {
                    if len > 0 {
                        layer = layer.iter().flat_map(|p| letters.iter().map(move |&x| p.cat(&[x]))).collect();
                    }
                    for mid in &layer {
                        if mid.len() >= block.len() && mid.ends_with(&block) {
                            continue;
                        }
                        out.push(self.monoid.canonical(&Word::concat([head, mid, tail]))?);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Decomposes the unknowns of `v·X ≐ p·Y` where `p` is a letter or a
    /// nonempty word of one family.
    pub fn reduce(&self, v: Letter, x: &[Letter], p: &[Letter], y: &[Letter]) -> Result<GmnReduction> {
        let m = &self.monoid;
        let lhs = Word::letter(v).cat(x);
        let rhs = Word::from(p).cat(y);
        if p.is_empty() || !m.words_equal(&lhs, &rhs)? {
            return Err(Error::Precondition(format!("{} and {} are not equal", m.fmt(&lhs), m.fmt(&rhs))));
        }
        let found = |case, xp: Word, yp: Word| -> Result<Option<GmnReduction>> {
            if let Some(z) = m.left_quotient(&yp, y)? {
                if m.words_equal(&xp.cat(&z), x)? {
                    return Ok(Some(GmnReduction { case, x_prefix: xp, y_prefix: yp, z }));
                }
            }
            Ok(None)
        };
        let res = if p.len() == 1 && p[0] == v {
            Some(GmnReduction {
                case: GmnLemmaCase::Cancel,
                x_prefix: Word::empty(),
                y_prefix: Word::empty(),
                z: Word::from(x),
            })
        } else {
            let pv = self.part_of(v);
            let pp = self.part_of(p[0]).filter(|&f| self.is_pure(f, p));
            match (pv, pp) {
                (Some(fv), Some(fp)) if fv != fp && p.len() == 1 => {
                    found(GmnLemmaCase::Commute, Word::from(p), Word::letter(v))?
                }
                (None, Some(f)) => {
                    let (r, c) = self.consec_divisor(f, p)?;
                    let xp = self.block(f).cat(&r);
                    found(GmnLemmaCase::SAgainstPure, xp, self.delta_quotient(f, &c)?)?
                }
                (Some(f), Some(fp)) if f == fp && p[0] != v => {
                    let (r, c) = self.consec_divisor(f, p)?;
                    let dv = self.delta_quotient(f, &[v])?;
                    let dc = self.delta_quotient(f, &c)?;
                    let g = f.other();
                    let gblock = self.block(g);
                    let mut hit = None;
                    for len in 0..=y.len() {
                        for wg in crate::word::all_words(self.letters(g).len(), len) {
                            let wg = Word::new(wg.iter().map(|&i| self.letters(g)[i as usize]).collect());
                            if len >= gblock.len() && wg.ends_with(&gblock) {
                                continue;
                            }
                            let xp = Word::concat([&wg, &dv, &r]);
                            let yp = wg.cat(&dc);
                            if let Some(red) = found(GmnLemmaCase::LetterAgainstPure, xp, yp)? {
                                hit = Some(red);
                                break;
                            }
                        }
                        if hit.is_some() {
                            break;
                        }
                    }
                    hit
                }
                _ => return Err(Error::Precondition("no lemma case applies to this equation".into())),
            }
        };
        res.ok_or_else(|| Error::Verification(format!("no decomposition for {} = {}", m.fmt(&lhs), m.fmt(&rhs))))
    }

    fn divides_delta(&self, a: &[Letter]) -> Result<bool> {
        // Left divisors of Δ use each letter at most once.
        let mut seen = FxHashSet::default();
        if !a.iter().all(|x| seen.insert(*x)) {
            return Ok(false);
        }
        self.monoid.is_divisor(Side::Left, a, &self.delta)
    }

    /// Certifies property P for `w`: every transit element is left-divisible
    /// by a transit element dividing Δ.
    ///
    /// The strata and the letters dividing `w` select a case; each first
    /// letter `l` of a transit element then gets the witnesses its branch
    /// prescribes, read off the normal form. Every witness is checked to be
    /// a transit element dividing Δ. As an exact cross-check, every transit
    /// divisor of Δ must have some witness as a left divisor.
    pub fn property_p(&self, w: &[Letter]) -> Result<PropertyPReport> {
        let m = &self.monoid;
        let strata = self.strata(w)?;
        let left_letters = self.left_letters(w)?;
        let (case, form_source) = self.classify(&strata)?;
        let normal_form = match &form_source {
            Some(src) => Some(self.normal_form(&m.canonical(src)?)?),
            None => None,
        };
        let mut proposals: Vec<Proposal> = Vec::new();
        for x in 0..(1 + self.m + self.n) as Letter {
            // Letters dividing w are transit elements; other letters may be.
            let (rule, exact) = if w.is_empty() || left_letters.contains(&x) {
                ("letter of L(w)", true)
            } else {
                ("single letter", false)
            };
            proposals.push(Proposal { letter: x, element: Word::letter(x), rule, exact });
        }
        if let Some(nf) = &normal_form {
            for l in 0..(1 + self.m + self.n) as Letter {
                if !left_letters.contains(&l) {
                    proposals.extend(self.branch_witnesses(nf, l)?);
                }
            }
        }
        let mut found: Vec<PWitness> = Vec::new();
        let mut rejected = Vec::new();
        for p in proposals {
            if !p.element.is_empty() && self.divides_delta(&p.element)? && m.transit_target(w, &p.element)?.is_some() {
                let element = m.canonical(&p.element)?;
                if !found.iter().any(|f| f.letter == p.letter && f.element == element) {
                    found.push(PWitness { letter: p.letter, element, rule: p.rule });
                }
            } else if p.exact {
                rejected.push((p.element, p.rule));
            }
        }
        let mut witnesses = Vec::new();
        for f in &found {
            let mut minimal = true;
            for g in &found {
                if g.element.len() < f.element.len() && m.is_divisor(Side::Left, &g.element, &f.element)? {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                witnesses.push(f.clone());
            }
        }
        witnesses.sort_by(|a, b| (a.letter, &a.element).cmp(&(b.letter, &b.element)));
        let mut uncovered = Vec::new();
        for d in &self.divisors {
            if m.transit_target(w, d)?.is_none() {
                continue;
            }
            let mut covered = false;
            for wi in &witnesses {
                if m.is_divisor(Side::Left, &wi.element, d)? {
                    covered = true;
                    break;
                }
            }
            if !covered {
                uncovered.push(d.clone());
            }
        }
        Ok(PropertyPReport {
            trace: PTrace { strata, left_letters, case, form_source: form_source.unwrap_or_default(), normal_form },
            witnesses,
            rejected,
            uncovered,
        })
    }

    /// Case label and the element whose normal form the formulas read
    /// (`None` when `k > 0`, where every letter divides `w`).
    fn classify(&self, st: &Strata) -> Result<(String, Option<Word>)> {
        if st.k > 0 {
            return Ok(("k>0".into(), None));
        }
        if st.remain.is_empty() {
            return Ok(("empty".into(), None));
        }
        if st.lambda[0] > 0 || st.lambda[1] > 0 {
            let part = if st.lambda[0] > 0 { "delta1" } else { "delta2" };
            let rest = if st.remain_prime.contains(&S) { "with-s" } else { "pure" };
            return Ok((format!("{part}-{rest}"), Some(st.remain_prime.clone())));
        }
        let ll = self.left_letters(&st.remain)?;
        let ts = ll.iter().filter(|&&x| self.part_of(x) == Some(Part::T)).count();
        let us = ll.iter().filter(|&&x| self.part_of(x) == Some(Part::U)).count();
        let d1s = self.block(Part::T).pow(st.mu[0]);
        let d2s = self.block(Part::U).pow(st.mu[1]);
        let rp = &st.remain_prime;
        let (label, src) = match (ll.contains(&S), ts, us) {
            (false, t, 1) if t == self.m => ("all-t-one-u", d2s.cat(rp)),
            (false, 1, u) if u == self.n => ("one-t-all-u", d1s.cat(rp)),
            (false, 1, 1) => ("one-t-one-u", Word::concat([&d1s, &d2s, rp])),
            (false, 1, 0) => ("one-t", st.remain.clone()),
            (false, 0, 1) => ("one-u", st.remain.clone()),
            (true, 0, 0) => ("s-only", st.remain.clone()),
            _ => return Err(Error::Verification(format!("no case matches {}", self.monoid.fmt(&st.remain)))),
        };
        Ok((label.into(), Some(src)))
    }

    /// Witnesses prescribed for transit elements with first letter `l`,
    /// which does not divide `w`.
    fn branch_witnesses(&self, nf: &GmnNormalForm, l: Letter) -> Result<Vec<Proposal>> {
        let mut out = Vec::new();
        let Some(f) = self.part_of(l) else {
            // Transit elements starting with s pass through mcm({s, w·s}).
            let (_, ct) = self.tilde_c(Part::T, nf.last(Part::T))?;
            let (_, cu) = self.tilde_c(Part::U, nf.last(Part::U))?;
            let qt = self.delta_quotient(Part::T, &ct)?;
            let qu = self.delta_quotient(Part::U, &cu)?;
            let s = Word::letter(S);
            let (tail, rule) = match (nf.blocks[0].0.is_empty(), nf.blocks[0].1.is_empty()) {
                (false, true) => (qt, "s·Δ_{1,C̃_1(w_N(t)s)}"),
                (true, false) => (qu, "s·Δ_{2,C̃_2(w_N(u)s)}"),
                _ => (qt.cat(&qu), "s·Δ_{1,C̃_1(w_N(t)s)}·Δ_{2,C̃_2(w_N(u)s)}"),
            };
            out.push(Proposal { letter: l, element: s.cat(&tail), rule, exact: true });
            return Ok(out);
        };
        let g = f.other();
        let last = nf.last(f);
        if let Some(prev) = nf.before_last(f) {
            let (_, ct) = self.tilde_c(f, prev)?;
            let q = self.delta_quotient(f, &ct)?;
            if self.monoid.left_divides(last, &q)?.is_some() {
                let element = self.delta_quotient(f, &ct.cat(last))?;
                out.push(Proposal { letter: l, element, rule: "Δ_{f,C̃_f(w_{N-1}s)·w_N}", exact: true });
                return Ok(out);
            }
        }
        if nf.n_s() == 0 {
            // Without an s in the form, an s from a Δ_i prefix of w can play
            // the role of w_{N-1}·s.
            if let Some(q) = self.try_quotient(f, &Word::letter(S).cat(last))? {
                out.push(Proposal { letter: l, element: q, rule: "Δ_{f,s·w_0}", exact: false });
            }
        }
        if last.is_empty() {
            // No s and an empty f block: C_f is undefined. Either l commutes
            // with w, or the whole Δ_{f,s} is needed.
            out.push(Proposal { letter: l, element: Word::letter(l), rule: "letter commuting with w", exact: false });
            out.push(Proposal { letter: l, element: self.block(f), rule: "Δ_{f,s}", exact: false });
            return Ok(out);
        }
        // A ≐ w'·Δ_{f,C_f(w_N)}·Z with w' a g-word not ending in the g block.
        let (_, c) = self.consec_divisor(f, last)?;
        let head = self.delta_quotient(f, &c)?;
        let g_last = nf.last(g);
        let full_g = self.block(g);
        for pre in self.distinct_words(g) {
            if pre == full_g {
                continue;
            }
            if pre.is_empty() {
                let (_, cg) = self.tilde_c(g, g_last)?;
                let with_g = head.cat(&self.delta_quotient(g, &cg)?);
                out.push(Proposal { letter: l, element: head.clone(), rule: "Δ_{f,C_f(w_N)}", exact: false });
                out.push(Proposal { letter: l, element: with_g, rule: "Δ_{f,C_f(w_N)}·Δ_{g,C̃_g(w_N s)}", exact: false });
                continue;
            }
            let (_, c_joined) = self.tilde_c(g, &g_last.cat(&pre))?;
            let (_, c_alone) = self.tilde_c(g, &pre)?;
            if c_joined == c_alone {
                let element = head.cat(&full_g);
                out.push(Proposal { letter: l, element, rule: "Δ_{f,C_f(w_N)}·Δ_{g,s}", exact: false });
            } else if let Some(q) = self.try_quotient(g, &c_joined)? {
                let element = Word::concat([&pre, &head, &q]);
                out.push(Proposal { letter: l, element, rule: "w'·Δ_{f,C_f(w_N)}·Δ_{g,C̃_g(w_N w' s)}", exact: false });
            }
        }
        Ok(out)
    }

    /// Words in the letters of `part` without repeated letters.
    fn distinct_words(&self, part: Part) -> Vec<Word> {
        let letters = self.letters(part);
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..letters.len() {
            layer = layer
                .iter()
                .flat_map(|p| letters.iter().filter(|x| !p.contains(x)).map(move |&x| p.cat(&[x])))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    /// For each letter `l`, the transit elements of `w` that left-divide Δ,
    /// have `l` as a left divisor and are minimal with that property, found
    /// by testing every divisor. This is the exhaustive counterpart of
    /// [`Gmn::property_p`], sorted by letter and then word.
    pub fn delta_divisor_transits(&self, w: &[Letter]) -> Result<Vec<(Letter, Word)>> {
        let m = &self.monoid;
        let mut transits = Vec::new();
        for d in &self.divisors {
            if m.transit_target(w, d)?.is_some() {
                for l in self.left_letters(d)? {
                    transits.push((l, d.clone()));
                }
            }
        }
        let mut out = Vec::new();
        for (l, d) in &transits {
            let mut minimal = true;
            for (l2, e) in &transits {
                if l2 == l && e.len() < d.len() && m.is_divisor(Side::Left, e, d)? {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                out.push((*l, d.clone()));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Conjugacy invariants: length, letter counts and the free images.
    pub fn free_invariant(&self, w: &[Letter]) -> FreeInvariant {
        let image = |part: Part| -> Vec<i16> {
            let letters = self.letters(part);
            let mut stack: Vec<i16> = Vec::new();
            let push = |x: i16, stack: &mut Vec<i16>| {
                if stack.last() == Some(&-x) {
                    stack.pop();
                } else {
                    stack.push(x);
                }
            };
            for &x in w {
                if x == S {
                    for i in (1..=letters.len() as i16).rev() {
                        push(-i, &mut stack);
                    }
                } else if let Some(pos) = letters.iter().position(|&y| y == x) {
                    push(pos as i16 + 1, &mut stack);
                }
            }
            // Cyclic reduction, then the least rotation.
            let mut lo = 0;
            let mut hi = stack.len();
            while hi - lo >= 2 && stack[lo] == -stack[hi - 1] {
                lo += 1;
                hi -= 1;
            }
            let core = &stack[lo..hi];
            (0..core.len().max(1))
                .map(|r| core[r.min(core.len())..].iter().chain(&core[..r.min(core.len())]).copied().collect())
                .min()
                .unwrap_or_default()
        };
        FreeInvariant { z: w.iter().filter(|&&x| x == S).count(), t_image: image(Part::T), u_image: image(Part::U) }
    }

    /// The orbit of `u` under divisors of Δ, with a property P report for
    /// each member.
    pub fn certified_orbit(&self, u: &[Letter]) -> Result<(OrbitState, Vec<PropertyPReport>)> {
        let orbit = self.monoid.orbit_closure(u, &self.delta)?;
        let reports = orbit.members().par_iter().map(|x| self.property_p(x)).collect::<Result<Vec<_>>>()?;
        Ok((orbit, reports))
    }

    /// Decides whether `v` is a conjugate of `u` (`A·v ≐ u·A`).
    pub fn conjugate(&self, u: &[Letter], v: &[Letter]) -> Result<ConjVerdict> {
        let m = &self.monoid;
        if u.len() != v.len() || !m.same_conserved_counts(u, v) || self.free_invariant(u) != self.free_invariant(v) {
            return Ok(ConjVerdict::No { reason: NoReason::Invariant });
        }
        let (orbit, reports) = self.certified_orbit(u)?;
        if let Some(e) = orbit.entry(&m.canonical(v)?) {
            return Ok(ConjVerdict::Yes { conjugator: e.conjugator.clone() });
        }
        if reports.iter().all(PropertyPReport::holds) {
            Ok(ConjVerdict::No { reason: NoReason::PropertyP })
        } else {
            Ok(ConjVerdict::NotFoundInOrbit)
        }
    }

    /// The anti-automorphism reversing words and the order within each family.
    pub fn phi(&self, w: &[Letter]) -> Word {
        let (m, n) = (self.m as Letter, self.n as Letter);
        Word::new(
            w.iter()
                .rev()
                .map(|&x| match self.part_of(x) {
                    None => S,
                    Some(Part::T) => m + 1 - x,
                    Some(Part::U) => m + (m + n + 1 - x),
                })
                .collect(),
        )
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::T => "t",
            Part::U => "u",
        })
    }
}

/// Canonical words keyed by free-quotient invariant and letter counts.
pub type InvariantBuckets = FxHashMap<(FreeInvariant, Vec<usize>), Vec<Word>>;

/// Canonical representatives of classes of length `n` grouped by the
/// invariants [`Gmn::free_invariant`] and letter counts.
pub fn invariant_buckets(g: &Gmn, n: usize) -> Result<InvariantBuckets> {
    let m = g.monoid();
    let mut out = InvariantBuckets::default();
    for c in m.all_classes(n)? {
        let w = c.canonical();
        let counts = (0..m.rank() as Letter).map(|x| w.count(x)).collect();
        out.entry((g.free_invariant(w), counts)).or_default().push(w.clone());
    }
    Ok(out)
}
