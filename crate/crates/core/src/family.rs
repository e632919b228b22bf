//! Symbolic sets of words: a finite list plus templates such as `bb c^i b`
//! with one shared integer parameter.

use crate::word::Word;

/// A block of a template: a fixed word, or a word raised to the parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Fixed(Word),
    Power(Word),
}

/// A word template `B1 B2 … Bk` whose powered blocks all use the same `i`,
/// for `i` in `min..=max` (`max = None` means unbounded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub blocks: Vec<Block>,
    pub min: usize,
    pub max: Option<usize>,
}

impl Template {
    pub fn new(blocks: Vec<Block>, min: usize, max: Option<usize>) -> Self {
        Template { blocks, min, max }
    }

    pub fn instantiate(&self, i: usize) -> Word {
        let mut v = Vec::new();
        for b in &self.blocks {
            match b {
                Block::Fixed(w) => v.extend_from_slice(w),
                Block::Power(w) => v.extend_from_slice(&w.pow(i)),
            }
        }
        Word::new(v)
    }

    /// Length of the instance at `i`.
    pub fn len_at(&self, i: usize) -> usize {
        self.blocks
            .iter()
            .map(|b| match b {
                Block::Fixed(w) => w.len(),
                Block::Power(w) => w.len() * i,
            })
            .sum()
    }

    fn stride(&self) -> usize {
        self.len_at(1) - self.len_at(0)
    }

    /// Admissible parameters not above `cap`.
    pub fn params_up_to(&self, cap: usize) -> std::ops::RangeInclusive<usize> {
        let hi = self.max.map_or(cap, |m| m.min(cap));
        self.min..=hi
    }

    /// Whether the template has finitely many instances.
    pub fn is_finite(&self) -> bool {
        self.max.is_some() || self.stride() == 0
    }

    pub fn render(&self, name: impl Fn(&[u8]) -> String) -> String {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Fixed(w) => name(w),
                Block::Power(w) if w.len() == 1 => format!("{}^i", name(w)),
                Block::Power(w) => format!("({})^i", name(w)),
            })
            .collect();
        let range = match self.max {
            Some(m) => format!("[{}<=i<={}]", self.min, m),
            None => format!("[i>={}]", self.min),
        };
        format!("{} {}", parts.join(" "), range)
    }
}

/// A finite set of words together with parametric templates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransitFamily {
    pub finite: Vec<Word>,
    pub templates: Vec<Template>,
}

impl TransitFamily {
    pub fn finite(words: Vec<Word>) -> Self {
        TransitFamily { finite: words, templates: Vec::new() }
    }

    pub fn with_template(mut self, t: Template) -> Self {
        self.templates.push(t);
        self
    }

    /// Every instance of length at most `max_len`, sorted and deduplicated
    /// as spellings.
    pub fn instances_up_to_len(&self, max_len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = self.finite.iter().filter(|w| w.len() <= max_len).cloned().collect();
        for t in &self.templates {
            let stride = t.stride();
            let mut i = t.min;
            while t.max.is_none_or(|m| i <= m) && t.len_at(i) <= max_len {
                out.push(t.instantiate(i));
                if stride == 0 {
                    break;
                }
                i += 1;
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Every instance with parameter at most `cap`.
    pub fn instances_up_to_param(&self, cap: usize) -> Vec<Word> {
        let mut out = self.finite.clone();
        for t in &self.templates {
            out.extend(t.params_up_to(cap).map(|i| t.instantiate(i)));
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn is_finite(&self) -> bool {
        self.templates.iter().all(Template::is_finite)
    }

    /// One-line rendering, e.g. `{a, c} ∪ bb c^i b [i>=0]`.
    pub fn render(&self, name: impl Fn(&[u8]) -> String) -> String {
        let fin: Vec<String> = self.finite.iter().map(|w| name(w)).collect();
        let mut parts = vec![format!("{{{}}}", fin.join(", "))];
        parts.extend(self.templates.iter().map(|t| t.render(&name)));
        parts.join(" ∪ ")
    }
}
