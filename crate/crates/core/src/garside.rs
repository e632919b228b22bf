//! Quasi-central, fundamental and Garside elements.

use crate::divisibility::{DivisorSet, Side};
use crate::engine::Monoid;
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Evidence that `element` is quasi-central: for every atom `s` there is an
/// atom `σ(s)` with `s·Δ ≐ Δ·σ(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiCentralCert {
    /// Canonical word of Δ.
    pub element: Word,
    /// `sigma[s]` is σ(s).
    pub sigma: Vec<Letter>,
    /// `witnesses[s]` is the member `Δ·σ(s)` of the class of `s·Δ`.
    pub witnesses: Vec<Word>,
}

impl QuasiCentralCert {
    /// Order of σ as a permutation.
    pub fn order(&self) -> usize {
        let mut ord = 1;
        for s in 0..self.sigma.len() {
            let mut len = 1;
            let mut x = self.sigma[s] as usize;
            while x != s {
                x = self.sigma[x] as usize;
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    /// Applies σ letter by letter.
    pub fn apply_sigma(&self, w: &[Letter]) -> Word {
        Word::new(w.iter().map(|&x| self.sigma[x as usize]).collect())
    }
}

/// Evidence that `Δ` is fundamental: quasi-central, and for every atom `s`
/// a quotient `Δ_s` with `Δ ≐ s·Δ_s ≐ Δ_s·σ(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalCert {
    pub qz: QuasiCentralCert,
    /// `quotients[s]` is the canonical `Δ_s`.
    pub quotients: Vec<Word>,
}

impl FundamentalCert {
    pub fn element(&self) -> &Word {
        &self.qz.element
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GarsideReport {
    pub element: Word,
    pub left: DivisorSet,
    pub right: DivisorSet,
    /// Left and right divisor sets coincide.
    pub balanced: bool,
    /// Every atom is a divisor.
    pub generating: bool,
}

impl GarsideReport {
    pub fn is_garside(&self) -> bool {
        self.balanced && self.generating
    }
}

/// The smallest power of Δ that is central, `Λ = Δ^ord(σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralPower {
    pub exponent: usize,
    pub element: Word,
}

/// Outcome of a minimality or indecomposability check, with the offending
/// divisor when the answer is no.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// Δ is not of the required kind to begin with.
    NotApplicable,
    /// A proper divisor (and, for decompositions, its cofactor) that breaks
    /// the property.
    Fails { divisor: Word, cofactor: Option<Word> },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiCentralEntry {
    pub cert: QuasiCentralCert,
    pub fundamental: bool,
    pub minimal_fundamental: bool,
    pub indecomposable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TamenessReport {
    /// Pairs (indecomposable quasi-central, minimal fundamental it divides on both sides).
    pub witnesses: Vec<(Word, Word)>,
    /// Indecomposable quasi-central elements with no such minimal fundamental
    /// element within the bound.
    pub unresolved: Vec<Word>,
    pub qz_bound: usize,
    pub fundamental_bound: usize,
}

impl TamenessReport {
    pub fn tame_within_bounds(&self) -> bool {
        self.unresolved.is_empty()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

// Picks one target per source so that the choice is a permutation.
fn choose_bijection(options: &[Vec<Letter>], used: &mut Vec<bool>, acc: &mut Vec<Letter>) -> bool {
    let i = acc.len();
    if i == options.len() {
        return true;
    }
    for &t in &options[i] {
        if !used[t as usize] {
            used[t as usize] = true;
            acc.push(t);
            if choose_bijection(options, used, acc) {
                return true;
            }
            acc.pop();
            used[t as usize] = false;
        }
    }
    false
}

impl Monoid {
    /// Certifies that `d` is quasi-central, or returns `None`.
    pub fn quasi_central_cert(&self, d: &[Letter]) -> Result<Option<QuasiCentralCert>> {
        let element = self.canonical(d)?;
        let atoms = self.atoms();
        let mut options = Vec::with_capacity(atoms.len());
        for &s in &atoms {
            let sd = Word::letter(s).cat(&element);
            let mut opts = Vec::new();
            for &t in &atoms {
                let dt = element.cat(&[t]);
                if self.same_conserved_counts(&sd, &dt) && self.words_equal(&sd, &dt)? {
                    opts.push(t);
                }
            }
            if opts.is_empty() {
                return Ok(None);
            }
            options.push(opts);
        }
        let mut sigma = Vec::new();
        if !choose_bijection(&options, &mut vec![false; atoms.len()], &mut sigma) {
            return Ok(None);
        }
        let witnesses = sigma.iter().map(|&t| element.cat(&[t])).collect();
        Ok(Some(QuasiCentralCert { element, sigma, witnesses }))
    }

    pub fn is_quasi_central(&self, d: &[Letter]) -> Result<bool> {
        Ok(self.quasi_central_cert(d)?.is_some())
    }

    /// Certifies that `d` is fundamental, or returns `None`.
    pub fn fundamental_cert(&self, d: &[Letter]) -> Result<Option<FundamentalCert>> {
        if d.is_empty() {
            return Ok(None);
        }
        let Some(qz) = self.quasi_central_cert(d)? else {
            return Ok(None);
        };
        let mut quotients = Vec::new();
        for s in self.atoms() {
            let Some(q) = self.left_divides(&[s], &qz.element)? else {
                return Ok(None);
            };
            if !self.words_equal(&q.cat(&[qz.sigma[s as usize]]), &qz.element)? {
                return Ok(None);
            }
            quotients.push(q);
        }
        Ok(Some(FundamentalCert { qz, quotients }))
    }

    pub fn is_fundamental(&self, d: &[Letter]) -> Result<bool> {
        Ok(self.fundamental_cert(d)?.is_some())
    }

    /// Compares the left and right divisor sets of `d` and checks that they
    /// contain every atom.
    pub fn garside_check(&self, d: &[Letter]) -> Result<GarsideReport> {
        let left = self.left_divisor_set(d)?;
        let right = self.right_divisor_set(d)?;
        let balanced = left.divisors == right.divisors;
        let generating = self.atoms().iter().all(|&s| left.contains(&Word::letter(s)));
        Ok(GarsideReport { element: left.element.clone(), left, right, balanced, generating })
    }

    /// `Λ = Δ^ord(σ)`, checked to commute with every atom.
    pub fn central_power(&self, cert: &QuasiCentralCert) -> Result<CentralPower> {
        let exponent = cert.order();
        let lambda = self.canonical(&cert.element.pow(exponent))?;
        for s in self.atoms() {
            let l = Word::letter(s).cat(&lambda);
            if !self.words_equal(&l, &lambda.cat(&[s]))? {
                return Err(Error::Verification(format!(
                    "{} is not central: fails to commute with {}",
                    self.fmt(&lambda),
                    self.fmt(&[s])
                )));
            }
        }
        Ok(CentralPower { exponent, element: lambda })
    }

    /// Whether `d` is fundamental with no proper fundamental divisor on
    /// either side.
    pub fn minimal_fundamental_check(&self, d: &[Letter]) -> Result<Verdict> {
        if !self.is_fundamental(d)? {
            return Ok(Verdict::NotApplicable);
        }
        for side in [Side::Left, Side::Right] {
            for u in self.divisor_set(d, side)?.divisors {
                if !u.is_empty() && u.len() < d.len() && self.is_fundamental(&u)? {
                    return Ok(Verdict::Fails { divisor: u, cofactor: None });
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// Whether the non-trivial quasi-central `d` is not a product of two
    /// non-trivial quasi-central elements.
    pub fn indecomposable_qz_check(&self, d: &[Letter]) -> Result<Verdict> {
        if d.is_empty() || !self.is_quasi_central(d)? {
            return Ok(Verdict::NotApplicable);
        }
        for u in self.left_divisor_set(d)?.divisors {
            if u.is_empty() || u.len() == d.len() || !self.is_quasi_central(&u)? {
                continue;
            }
            let v = self.left_divides(&u, d)?.expect("divisor from the divisor set");
            if self.is_quasi_central(&v)? {
                return Ok(Verdict::Fails { divisor: u, cofactor: Some(v) });
            }
        }
        Ok(Verdict::Holds)
    }

    /// Every non-trivial quasi-central element of length at most `bound`,
    /// with its classification.
    pub fn search_quasi_central(&self, bound: usize) -> Result<Vec<QuasiCentralEntry>> {
        let mut found = Vec::new();
        for len in 1..=bound {
            let mut reps = Vec::new();
            self.for_each_class(len, |c| {
                reps.push(c.canonical().clone());
                Ok(())
            })?;
            for d in reps {
                if !self.quick_qz_filter(&d)? {
                    continue;
                }
                if let Some(cert) = self.quasi_central_cert(&d)? {
                    found.push(cert);
                }
            }
        }
        let mut out = Vec::new();
        for cert in found {
            let fundamental = self.is_fundamental(&cert.element)?;
            let minimal_fundamental = fundamental && self.minimal_fundamental_check(&cert.element)?.holds();
            let indecomposable = self.indecomposable_qz_check(&cert.element)?.holds();
            out.push(QuasiCentralEntry { cert, fundamental, minimal_fundamental, indecomposable });
        }
        Ok(out)
    }

    // Necessary condition for the first atom, checked without the memo so a
    // wide scan does not evict useful classes.
    fn quick_qz_filter(&self, d: &Word) -> Result<bool> {
        let s = 0 as Letter;
        let sd = Word::letter(s).cat(d);
        let candidates: Vec<Word> = self
            .atoms()
            .into_iter()
            .map(|t| d.cat(&[t]))
            .filter(|dt| self.same_conserved_counts(&sd, dt))
            .collect();
        if candidates.is_empty() {
            return Ok(false);
        }
        let class = self.enumerate_uncached(&sd)?;
        Ok(candidates.iter().any(|dt| class.contains(dt)))
    }

    /// Checks that every indecomposable quasi-central element of length at
    /// most `qz_bound` divides, on both sides, some minimal fundamental
    /// element of length at most `fundamental_bound`.
    pub fn tameness_probe(&self, qz_bound: usize, fundamental_bound: usize) -> Result<TamenessReport> {
        let entries = self.search_quasi_central(qz_bound.max(fundamental_bound))?;
        let minimal: Vec<&Word> = entries
            .iter()
            .filter(|e| e.minimal_fundamental && e.cert.element.len() <= fundamental_bound)
            .map(|e| &e.cert.element)
            .collect();
        let mut witnesses = Vec::new();
        let mut unresolved = Vec::new();
        for e in entries.iter().filter(|e| e.indecomposable && e.cert.element.len() <= qz_bound) {
            let d0 = &e.cert.element;
            let mut hit = None;
            for &m in &minimal {
                if self.is_divisor(Side::Left, d0, m)? && self.is_divisor(Side::Right, d0, m)? {
                    hit = Some(m.clone());
                    break;
                }
            }
            match hit {
                Some(m) => witnesses.push((d0.clone(), m)),
                None => unresolved.push(d0.clone()),
            }
        }
        Ok(TamenessReport { witnesses, unresolved, qz_bound, fundamental_bound })
    }
}
