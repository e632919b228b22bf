//! Positive homogeneous presentations and their text format.
//!
//! ```text
//! # comment
//! generators: a b c
//! relation: c b b = b b a
//! relation: a b = b c
//! ```

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// One defining relation `lhs = rhs`. Both sides have the same length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

/// A signed letter of a group word: the generator and whether it is inverted.
pub type GroupLetter = (Letter, bool);

/// A validated presentation. Generators that a length-1 relation identified
/// are folded into the earliest declared one and kept as aliases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    aliases: Vec<(String, Letter)>,
    relations: Vec<Relation>,
}

impl Presentation {
    /// Builds a presentation from generator names and relations given as
    /// pairs of name lists. Runs the same validation as the text parser.
    pub fn from_names(generators: &[&str], relations: &[(&[&str], &[&str])]) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let mut rels = Vec::new();
        for (lhs, rhs) in relations {
            let l = lhs.iter().map(|s| lookup(&names, s)).collect::<Result<Vec<_>>>()?;
            let r = rhs.iter().map(|s| lookup(&names, s)).collect::<Result<Vec<_>>>()?;
            rels.push((l, r, 0usize));
        }
        build(names, rels)
    }

    /// Parses the text format. See the module docs.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut rels = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let body = line.trim();
            let Some((key, rest)) = body.split_once(':') else {
                return Err(syntax(line_no, indent + 1, "expected `generators:` or `relation:`"));
            };
            let rest_col = indent + key.len() + 2;
            match key.trim() {
                "generators" => {
                    if names.is_some() {
                        return Err(syntax(line_no, indent + 1, "generators declared twice"));
                    }
                    let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                    for (i, n) in list.iter().enumerate() {
                        check_name(n, line_no, rest_col)?;
                        if list[..i].contains(n) {
                            return Err(Error::DuplicateGenerator(n.clone()));
                        }
                    }
                    if list.is_empty() {
                        return Err(Error::EmptyAlphabet);
                    }
                    names = Some(list);
                }
                "relation" => {
                    let Some(gens) = names.as_ref() else {
                        return Err(syntax(line_no, indent + 1, "relation before generators"));
                    };
                    let Some((l, r)) = rest.split_once('=') else {
                        return Err(syntax(line_no, rest_col, "relation needs `=`"));
                    };
                    if r.contains('=') {
                        return Err(syntax(line_no, rest_col, "relation has more than one `=`"));
                    }
                    let lhs = parse_side(gens, l, line_no, rest_col)?;
                    let rhs = parse_side(gens, r, line_no, rest_col + l.len() + 1)?;
                    rels.push((lhs, rhs, line_no));
                }
                other => {
                    return Err(syntax(line_no, indent + 1, &format!("unknown directive `{other}`")));
                }
            }
        }
        let names = names.ok_or(Error::EmptyAlphabet)?;
        build(names, rels)
    }

    /// Renders the presentation in the text format accepted by [`Presentation::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("generators: {}\n", self.names.join(" "));
        for r in &self.relations {
            out.push_str(&format!("relation: {} = {}\n", self.format_word(&r.lhs), self.format_word(&r.rhs)));
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Letter) -> &str {
        &self.names[x as usize]
    }

    pub fn aliases(&self) -> &[(String, Letter)] {
        &self.aliases
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Generator id for a name or alias.
    pub fn letter(&self, name: &str) -> Result<Letter> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i as Letter);
        }
        self.aliases
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, x)| x)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// The presentation with every relation side reversed. Right division in
    /// `self` is left division in the reverse.
    pub fn reversed(&self) -> Presentation {
        Presentation {
            names: self.names.clone(),
            aliases: self.aliases.clone(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation { lhs: r.lhs.reversed(), rhs: r.rhs.reversed() })
                .collect(),
        }
    }

    /// Letters whose number of occurrences is preserved by every relation.
    pub fn conserved_letters(&self) -> Vec<Letter> {
        (0..self.rank() as Letter)
            .filter(|&x| self.relations.iter().all(|r| r.lhs.count(x) == r.rhs.count(x)))
            .collect()
    }

    /// Parses a whitespace-separated word. `e` (or nothing) is the empty word.
    /// When every generator name is a single character, a token that is not a
    /// name is read one character per letter, so `bcb` means `b c b`.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == ["e"] {
            return Ok(Word::empty());
        }
        for tok in tokens {
            out.extend(self.parse_token(tok)?);
        }
        Ok(Word::new(out))
    }

    /// Parses a group word; inverse letters are written `x^-1`.
    pub fn parse_group_word(&self, text: &str) -> Result<Vec<GroupLetter>> {
        let mut out = Vec::new();
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == ["e"] {
            return Ok(out);
        }
        for tok in tokens {
            if let Some(base) = tok.strip_suffix("^-1") {
                let letters = self.parse_token(base)?;
                // (xy)^-1 = y^-1 x^-1
                out.extend(letters.into_iter().rev().map(|x| (x, true)));
            } else {
                out.extend(self.parse_token(tok)?.into_iter().map(|x| (x, false)));
            }
        }
        Ok(out)
    }

    fn parse_token(&self, tok: &str) -> Result<Vec<Letter>> {
        if let Ok(x) = self.letter(tok) {
            return Ok(vec![x]);
        }
        let single = self.names.iter().chain(self.aliases.iter().map(|(n, _)| n)).all(|n| n.chars().count() == 1);
        if single && tok.chars().count() > 1 {
            let mut buf = [0u8; 4];
            return tok.chars().map(|c| self.letter(c.encode_utf8(&mut buf))).collect();
        }
        Err(Error::UnknownGenerator(tok.to_string()))
    }

    /// Space-separated generator names, or `e` for the empty word.
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.iter().map(|&x| self.name(x)).collect::<Vec<_>>().join(" ")
    }

    pub fn format_group_word(&self, g: &[GroupLetter]) -> String {
        if g.is_empty() {
            return "e".to_string();
        }
        g.iter()
            .map(|&(x, inv)| if inv { format!("{}^-1", self.name(x)) } else { self.name(x).to_string() })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax { line, column, message: message.to_string() }
}

fn check_name(n: &str, line: usize, col: usize) -> Result<()> {
    if n == "e" {
        return Err(syntax(line, col, "`e` is reserved for the empty word"));
    }
    if n.contains('=') || n.contains('^') {
        return Err(syntax(line, col, &format!("invalid generator name `{n}`")));
    }
    Ok(())
}

fn lookup(names: &[String], s: &str) -> Result<usize> {
    names.iter().position(|n| n == s).ok_or_else(|| Error::UnknownGenerator(s.to_string()))
}

fn parse_side(names: &[String], text: &str, line: usize, col: usize) -> Result<Vec<usize>> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.is_empty() {
        return Err(syntax(line, col, "empty relation side"));
    }
    toks.iter().map(|t| lookup(names, t)).collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

fn build(names: Vec<String>, rels: Vec<(Vec<usize>, Vec<usize>, usize)>) -> Result<Presentation> {
    if names.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    if names.len() > Letter::MAX as usize {
        return Err(Error::TooManyGenerators(names.len()));
    }
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::DuplicateGenerator(n.clone()));
        }
    }
    for (l, r, line) in &rels {
        if l.is_empty() || r.is_empty() {
            return Err(Error::Syntax { line: *line, column: 1, message: "empty relation side".into() });
        }
        if l.len() != r.len() {
            return Err(Error::NonHomogeneous { line: *line, lhs: l.len(), rhs: r.len() });
        }
    }
    // Length-1 relations identify generators; keep the earliest declared one.
    let mut parent: Vec<usize> = (0..names.len()).collect();
    for (l, r, _) in &rels {
        if l.len() == 1 {
            let (a, b) = (find(&mut parent, l[0]), find(&mut parent, r[0]));
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
        }
    }
    let mut new_id = vec![0 as Letter; names.len()];
    let mut kept = Vec::new();
    for (i, name) in names.iter().enumerate() {
        if find(&mut parent, i) == i {
            new_id[i] = kept.len() as Letter;
            kept.push(name.clone());
        }
    }
    let mut aliases = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let root = find(&mut parent, i);
        if root != i {
            aliases.push((name.clone(), new_id[root]));
        }
    }
    let map = |side: &[usize], parent: &mut [usize]| -> Word {
        Word::new(side.iter().map(|&x| new_id[find(parent, x)]).collect())
    };
    let mut relations: Vec<Relation> = Vec::new();
    for (l, r, _) in &rels {
        if l.len() == 1 {
            continue;
        }
        let (lhs, rhs) = (map(l, &mut parent), map(r, &mut parent));
        if lhs == rhs {
            continue;
        }
        let dup = relations
            .iter()
            .any(|q| (q.lhs == lhs && q.rhs == rhs) || (q.lhs == rhs && q.rhs == lhs));
        if !dup {
            relations.push(Relation { lhs, rhs });
        }
    }
    Ok(Presentation { names: kept, aliases, relations })
}
