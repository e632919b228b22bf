//! The monoid B_ii = ⟨a, b, c | cbb = bba, ab = bc, ac = ca⟩.
//!
//! Every relation preserves the number of b's, and `Δ_0 = bbb` is central.
//! Elements with at least four b's are divisible by `Δ_0`, which leaves four
//! strata W(0)..W(3) with explicit normal forms and explicit minimal transit
//! sets. Conjugacy is decided by closing under those sets.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::conjugacy::{ConjVerdict, NoReason};
use crate::engine::Monoid;
use crate::error::{Error, Result};
use crate::family::{Block, Template, TransitFamily};
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

pub const A: Letter = 0;
pub const B: Letter = 1;
pub const C: Letter = 2;

const PRESENTATION: &str = "\
generators: a b c
relation: c b b = b b a
relation: a b = b c
relation: a c = c a
";

pub fn bii_presentation() -> Presentation {
    Presentation::parse(PRESENTATION).expect("built-in presentation parses")
}

/// Number of b's; constant on classes.
pub fn b_count(w: &[Letter]) -> usize {
    w.iter().filter(|&&x| x == B).count()
}

/// `Δ_0 = bbb`.
pub fn delta0() -> Word {
    Word::new(vec![B; 3])
}

/// `Δ_k = (b c^k)^3`.
pub fn delta_k(k: usize) -> Word {
    let mut one = vec![B];
    one.extend(std::iter::repeat_n(C, k));
    Word::new(one).pow(3)
}

/// The anti-automorphism `W ↦ σ(rev W)` with σ swapping a and c.
pub fn phi(w: &[Letter]) -> Word {
    Word::new(w.iter().rev().map(|&x| 2 - x).collect())
}

fn power(x: Letter, n: usize) -> Word {
    Word::new(vec![x; n])
}

type DivMemo = FxHashMap<(Letter, Word), Option<Word>>;

/// Some `X` with `v·X ≐ y`.
fn divide_letter(v: Letter, y: &[Letter], memo: &mut DivMemo) -> Option<Word> {
    let (&y1, tail) = y.split_first()?;
    if y1 == v {
        return Some(Word::from(tail));
    }
    let key = (v, Word::from(y));
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let out = match (v, y1) {
        (A, B) => divide_letter(C, tail, memo).map(|z| Word::letter(B).cat(&z)),
        (B, A) => divide_letter(B, tail, memo).map(|z| Word::letter(C).cat(&z)),
        (A, C) => divide_letter(A, tail, memo).map(|z| Word::letter(C).cat(&z)),
        (C, A) => divide_letter(C, tail, memo).map(|z| Word::letter(A).cat(&z)),
        (B, C) => divide_by_family(tail, (A, [B, B]), (C, [B, A]), memo),
        (C, B) => divide_by_family(tail, (C, [B, A]), (A, [B, B]), memo),
        _ => unreachable!("letters are a, b, c"),
    };
    memo.insert(key, out.clone());
    out
}

/// Solves `Y ≐ y_pow^k · y_tail · Z` for the first `k` that works and
/// returns `x_pow^k · x_tail · Z`. With `(a, bb, c, ba)` this divides `cY`
/// by `b`; with `(c, ba, a, bb)` it divides `bY` by `c`.
fn divide_by_family(
    y: &[Letter],
    (y_pow, y_tail): (Letter, [Letter; 2]),
    (x_pow, x_tail): (Letter, [Letter; 2]),
    memo: &mut DivMemo,
) -> Option<Word> {
    let mut rest = Word::from(y);
    let mut k = 0;
    loop {
        let z = divide_letter(y_tail[0], &rest, memo).and_then(|r| divide_letter(y_tail[1], &r, memo));
        if let Some(z) = z {
            let mut x = vec![x_pow; k];
            x.extend_from_slice(&x_tail);
            x.extend_from_slice(&z);
            return Some(Word::new(x));
        }
        rest = divide_letter(y_pow, &rest, memo)?;
        k += 1;
    }
}

/// One of the four normal-form shapes of an element with at most three b's:
/// `a^p c^q`, `a^p c^q b a^r`, `a^p c^q bb c^r`, `a^p c^q b a^r bb`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub j: usize,
    pub p: usize,
    pub q: usize,
    /// Always 0 when `j = 0`.
    pub r: usize,
}

impl Shape {
    pub fn word(&self) -> Word {
        let head = Word::concat([&power(A, self.p), &power(C, self.q)]);
        match self.j {
            0 => head,
            1 => Word::concat([&head, &power(B, 1), &power(A, self.r)]),
            2 => Word::concat([&head, &power(B, 2), &power(C, self.r)]),
            3 => Word::concat([&head, &power(B, 1), &power(A, self.r), &power(B, 2)]),
            _ => unreachable!("shapes have at most three b's"),
        }
    }

    /// All shapes with `j` b's and total length `n`.
    fn all(j: usize, n: usize) -> Vec<Shape> {
        let mut out = Vec::new();
        if n < j {
            return out;
        }
        let free = n - j;
        for p in 0..=free {
            for q in 0..=free - p {
                let r = free - p - q;
                if j == 0 && r > 0 {
                    continue;
                }
                out.push(Shape { j, p, q, r });
            }
        }
        out
    }
}

/// `w ≐ Δ_0^k · shape` with `k` maximal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiiNormalForm {
    pub k: usize,
    pub shape: Shape,
}

impl BiiNormalForm {
    pub fn word(&self) -> Word {
        delta0().pow(self.k).cat(&self.shape.word())
    }
}

impl fmt::Display for BiiNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Shape { j, p, q, r } = self.shape;
        write!(f, "k={} j={} p={} q={}", self.k, j, p, q)?;
        if j > 0 {
            write!(f, " r={r}")?;
        }
        Ok(())
    }
}

/// Which of the lemma's cases an equation `v·X ≐ v'·Y` falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaCase {
    /// `v = v'`, so `X ≐ Y`.
    Cancel,
    /// `{v, v'} = {a, b}`: `aX ≐ bY` forces `X ≐ bZ`, `Y ≐ cZ`.
    AB,
    /// `{v, v'} = {a, c}`: `aX ≐ cY` forces `X ≐ cZ`, `Y ≐ aZ`.
    AC,
    /// `{v, v'} = {b, c}`: `bX ≐ cY` forces `X ≐ c^k ba Z`, `Y ≐ a^k bb Z`.
    BC,
}

/// A decomposition `X ≐ x_prefix·Z`, `Y ≐ y_prefix·Z` of the unknowns of
/// `v·X ≐ v'·Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiiReduction {
    pub case: LemmaCase,
    /// The exponent in the `{b, c}` case.
    pub k: Option<usize>,
    pub x_prefix: Word,
    pub y_prefix: Word,
    pub z: Word,
}

/// The row of the minimal transit table an element falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableRow {
    /// The empty word; every letter is a minimal transit element.
    Empty,
    /// `j ≤ 2` b's with normal form exponents `p, q, r`. Only whether `p`
    /// and `q` vanish matters, plus `r` in two rows.
    Stratum { j: usize, p_zero: bool, q_zero: bool, r: usize },
    /// Three b's.
    Three,
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TableRow::Empty => write!(f, "W(0), empty word"),
            TableRow::Three => write!(f, "W(3)"),
            TableRow::Stratum { j, p_zero, q_zero, r } => {
                let pq = match (p_zero, q_zero) {
                    (true, false) => "p=0, q>=1",
                    (false, true) => "q=0, p>=1",
                    (false, false) => "p,q>=1",
                    (true, true) => "p=q=0",
                };
                if j == 0 {
                    write!(f, "W(0), {pq}")
                } else {
                    write!(f, "W({j}), {pq}, r={r}")
                }
            }
        }
    }
}

fn letters(ls: &[Letter]) -> Vec<Word> {
    ls.iter().map(|&x| Word::letter(x)).collect()
}

fn fixed(w: Word) -> Block {
    Block::Fixed(w)
}

fn pow_block(x: Letter) -> Block {
    Block::Power(Word::letter(x))
}

/// `c^i b a^i` for `i` in `min..=max`.
fn cba_template(min: usize, max: Option<usize>) -> Template {
    Template::new(vec![pow_block(C), fixed(power(B, 1)), pow_block(A)], min, max)
}

/// `a^i c^(i+r) b a^(i+r)` for `i ≥ 1`, written `a^i c^i · c^r b a^r · a^i`.
fn acba_template(r: usize) -> Template {
    let mid = Word::concat([&power(C, r), &power(B, 1), &power(A, r)]);
    Template::new(vec![pow_block(A), pow_block(C), fixed(mid), pow_block(A)], 1, None)
}

impl TableRow {
    /// The minimal transit elements of every element in this row.
    pub fn family(&self) -> TransitFamily {
        match *self {
            TableRow::Empty | TableRow::Three => TransitFamily::finite(letters(&[A, B, C])),
            TableRow::Stratum { j, p_zero, q_zero, r } => match (j, p_zero, q_zero) {
                (0, true, false) => TransitFamily::finite(vec![Word::letter(A), Word::letter(C), power(B, 2)]),
                (0, false, true) => TransitFamily::finite(letters(&[A, B, C])),
                (0, false, false) => TransitFamily::finite(letters(&[A, C]))
                    .with_template(Template::new(vec![fixed(power(B, 2)), pow_block(C), fixed(power(B, 1))], 0, None)),
                (1 | 2, true, false) => TransitFamily::finite(letters(&[B, C])),
                (1, false, true) => TransitFamily::finite(letters(&[A, B])).with_template(cba_template(1, Some(r))),
                (2, false, true) => TransitFamily::finite(letters(&[A, B])),
                (1 | 2, false, false) => TransitFamily::finite(letters(&[A, B, C])),
                (1, true, true) => TransitFamily::finite(letters(&[B]))
                    .with_template(cba_template(1, Some(r)))
                    .with_template(acba_template(r)),
                (2, true, true) => TransitFamily::finite(letters(&[B])).with_template(acba_template(0)),
                _ => unreachable!("rows cover j <= 2"),
            },
        }
    }

    /// The twelve rows of the table, with `r` set to `r` where it matters.
    pub fn printed_rows(r: usize) -> Vec<TableRow> {
        let mut rows = vec![];
        for j in 0..=2 {
            for (p_zero, q_zero) in [(true, false), (false, true), (false, false), (true, true)] {
                if j == 0 && p_zero && q_zero {
                    continue;
                }
                let r = if j == 0 { 0 } else { r };
                rows.push(TableRow::Stratum { j, p_zero, q_zero, r });
            }
        }
        rows.push(TableRow::Three);
        rows
    }

    /// A shape lying in this row, with the given non-zero exponent for `p`
    /// and `q` where they are required to be positive.
    pub fn representative(&self, pq: usize) -> Word {
        match *self {
            TableRow::Empty => Word::empty(),
            TableRow::Three => delta0(),
            TableRow::Stratum { j, p_zero, q_zero, r } => {
                let p = if p_zero { 0 } else { pq };
                let q = if q_zero { 0 } else { pq };
                Shape { j, p, q, r: if j == 0 { 0 } else { r } }.word()
            }
        }
    }
}

/// The B_ii monoid with its specialized procedures.
pub struct Bii {
    monoid: Monoid,
}

impl Default for Bii {
    fn default() -> Self {
        Self::new()
    }
}

impl Bii {
    pub fn new() -> Self {
        Bii { monoid: Monoid::new(bii_presentation()) }
    }

    pub fn with_ceiling(self, ceiling: usize) -> Self {
        Bii { monoid: self.monoid.with_ceiling(ceiling) }
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    /// Largest `k` with `Δ_0^k` left-dividing `w`, and the quotient.
    pub fn delta0_split(&self, w: &[Letter]) -> Result<(usize, Word)> {
        let d = delta0();
        let mut k = 0;
        let mut rest = Word::from(w);
        while let Some(q) = self.monoid.left_quotient(&d, &rest)? {
            k += 1;
            rest = q;
        }
        Ok((k, rest))
    }

    pub fn delta0_exponent(&self, w: &[Letter]) -> Result<usize> {
        Ok(self.delta0_split(w)?.0)
    }

    /// `w ≐ Δ_0^k · shape`, found by testing every shape of the right length
    /// against the class of the remainder. Errors if none or several match.
    pub fn normal_form(&self, w: &[Letter]) -> Result<BiiNormalForm> {
        let (k, rest) = self.delta0_split(w)?;
        let j = b_count(&rest);
        if j > 3 {
            return Err(Error::Verification(format!(
                "{} has {j} b's but is not divisible by bbb",
                self.monoid.fmt(&rest)
            )));
        }
        let class = self.monoid.enumerate_class(&rest)?;
        let mut hits = Shape::all(j, rest.len()).into_iter().filter(|s| class.contains(&s.word()));
        let shape = hits
            .next()
            .ok_or_else(|| Error::Verification(format!("no normal form for {}", self.monoid.fmt(&rest))))?;
        if let Some(other) = hits.next() {
            return Err(Error::Verification(format!(
                "two normal forms {} and {} for one class",
                self.monoid.fmt(&shape.word()),
                self.monoid.fmt(&other.word())
            )));
        }
        Ok(BiiNormalForm { k, shape })
    }

    /// Decomposes the unknowns of `v·X ≐ v'·Y`.
    pub fn reduce(&self, v: Letter, v2: Letter, x: &[Letter], y: &[Letter]) -> Result<BiiReduction> {
        let m = &self.monoid;
        if v > C || v2 > C {
            return Err(Error::Precondition("letters must be a, b or c".into()));
        }
        let lhs = Word::letter(v).cat(x);
        let rhs = Word::letter(v2).cat(y);
        if !m.words_equal(&lhs, &rhs)? {
            return Err(Error::Precondition(format!(
                "{} and {} are not equal",
                m.fmt(&lhs),
                m.fmt(&rhs)
            )));
        }
        if v == v2 {
            return Ok(BiiReduction {
                case: LemmaCase::Cancel,
                k: None,
                x_prefix: Word::empty(),
                y_prefix: Word::empty(),
                z: Word::from(x),
            });
        }
        if v > v2 {
            let mut red = self.reduce(v2, v, y, x)?;
            std::mem::swap(&mut red.x_prefix, &mut red.y_prefix);
            return Ok(red);
        }
        let candidates: Vec<(Option<usize>, Word, Word)> = match (v, v2) {
            (A, B) => vec![(None, power(B, 1), power(C, 1))],
            (A, C) => vec![(None, power(C, 1), power(A, 1))],
            _ => (0..x.len().saturating_sub(1))
                .map(|k| {
                    (
                        Some(k),
                        Word::concat([&power(C, k), &Word::new(vec![B, A])]),
                        Word::concat([&power(A, k), &power(B, 2)]),
                    )
                })
                .collect(),
        };
        let case = match (v, v2) {
            (A, B) => LemmaCase::AB,
            (A, C) => LemmaCase::AC,
            _ => LemmaCase::BC,
        };
        for (k, xp, yp) in candidates {
            if let Some(z) = m.left_quotient(&xp, x)? {
                if m.words_equal(&yp.cat(&z), y)? {
                    return Ok(BiiReduction { case, k, x_prefix: xp, y_prefix: yp, z });
                }
            }
        }
        Err(Error::Verification(format!(
            "no decomposition for {} = {}",
            m.fmt(&lhs),
            m.fmt(&rhs)
        )))
    }

    /// Some `X` with `u·X ≐ w`, found letter by letter with the cancellation
    /// lemma instead of enumerating the class of `w`.
    ///
    /// To divide `y·Y'` by a letter `v ≠ y` the lemma names the only possible
    /// shapes: `aX ≐ bY'` needs `Y' ≐ cZ` and gives `X ≐ bZ`, `aX ≐ cY'`
    /// needs `Y' ≐ aZ` and gives `X ≐ cZ`, and `bX ≐ cY'` needs
    /// `Y' ≐ a^k bb Z` for some `k` and gives `X ≐ c^k ba Z`.
    pub fn left_divide(&self, u: &[Letter], w: &[Letter]) -> Option<Word> {
        let mut memo = FxHashMap::default();
        let mut rest = Word::from(w);
        for &v in u {
            rest = divide_letter(v, &rest, &mut memo)?;
        }
        Some(rest)
    }

    /// `V` with `a·V ≐ w·a`, if `a` is a transit element of `w`.
    pub fn transit_target(&self, w: &[Letter], a: &[Letter]) -> Option<Word> {
        self.left_divide(a, &Word::from(w).cat(a))
    }

    /// Removes `Δ_0` factors while at least four b's remain. Minimal transit
    /// sets and conjugates are unchanged by this, since `Δ_0` is central and
    /// the cofactor of a conjugation equation keeps at least four b's.
    pub fn strip(&self, w: &[Letter]) -> Result<(usize, Word)> {
        let d = delta0();
        let mut k = 0;
        let mut rest = Word::from(w);
        while b_count(&rest) >= 4 {
            rest = self.monoid.left_quotient(&d, &rest)?.ok_or_else(|| {
                Error::Verification(format!("{} is not divisible by bbb", self.monoid.fmt(&rest)))
            })?;
            k += 1;
        }
        Ok((k, rest))
    }

    /// The table row of `w` after stripping `Δ_0` factors.
    pub fn table_row(&self, w: &[Letter]) -> Result<TableRow> {
        let (_, rest) = self.strip(w)?;
        if rest.is_empty() {
            return Ok(TableRow::Empty);
        }
        let j = b_count(&rest);
        if j == 3 {
            return Ok(TableRow::Three);
        }
        let nf = self.normal_form(&rest)?;
        debug_assert_eq!(nf.k, 0);
        let Shape { p, q, r, .. } = nf.shape;
        Ok(TableRow::Stratum { j, p_zero: p == 0, q_zero: q == 0, r })
    }

    /// The minimal transit elements of `w` as a symbolic family.
    pub fn trans_min_table(&self, w: &[Letter]) -> Result<TransitFamily> {
        Ok(self.table_row(w)?.family())
    }

    /// Every conjugate of `w`, as canonical words, each with a conjugator
    /// `A` such that `A·V ≐ w·A`. Template parameters go up to `|w| + 3`.
    pub fn conjugates(&self, w: &[Letter]) -> Result<Vec<(Word, Word)>> {
        let m = &self.monoid;
        let cap = w.len() + 3;
        let (_, rest) = self.strip(w)?;
        let start = m.canonical(&rest)?;
        let mut seen: FxHashMap<Word, Word> = FxHashMap::default();
        seen.insert(start.clone(), Word::empty());
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let via = seen[&x].clone();
            for a in self.trans_min_table(&x)?.instances_up_to_param(cap) {
                let target = self.transit_target(&x, &a).ok_or_else(|| {
                    Error::Verification(format!("{} is not a transit element of {}", m.fmt(&a), m.fmt(&x)))
                })?;
                let target = m.canonical(&target)?;
                if !seen.contains_key(&target) {
                    seen.insert(target.clone(), via.cat(&a));
                    queue.push_back(target);
                }
            }
        }
        // Put the stripped Δ_0 factors back.
        let mut out = Vec::with_capacity(seen.len());
        for (v, a) in seen {
            let full = if v.len() == w.len() { v } else { m.canonical(&delta0().pow((w.len() - v.len()) / 3).cat(&v))? };
            out.push((full, a));
        }
        out.sort();
        Ok(out)
    }

    /// Decides whether `v` is a conjugate of `u`.
    pub fn conjugate(&self, u: &[Letter], v: &[Letter]) -> Result<ConjVerdict> {
        if u.len() != v.len() || b_count(u) != b_count(v) {
            return Ok(ConjVerdict::No { reason: NoReason::Invariant });
        }
        let target = self.monoid.canonical(v)?;
        match self.conjugates(u)?.into_iter().find(|(c, _)| *c == target) {
            Some((_, a)) => Ok(ConjVerdict::Yes { conjugator: a }),
            None => Ok(ConjVerdict::No { reason: NoReason::ExactTable }),
        }
    }
}
