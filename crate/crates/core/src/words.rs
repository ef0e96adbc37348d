//! Words over `S ⊔ S⁻¹`, free and cyclic reduction, and group presentations.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A generator or its formal inverse.
///
/// The derived ordering (generator index first, uninverted before inverted)
/// is the fixed total order used for canonical rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator_id: usize,
    pub inverted: bool,
}

impl Letter {
    pub const fn new(generator_id: usize, inverted: bool) -> Self {
        Self {
            generator_id,
            inverted,
        }
    }

    pub const fn gen(generator_id: usize) -> Self {
        Self::new(generator_id, false)
    }

    pub const fn inv(generator_id: usize) -> Self {
        Self::new(generator_id, true)
    }

    #[must_use]
    pub const fn inverse(self) -> Self {
        Self::new(self.generator_id, !self.inverted)
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator_id == other.generator_id && self.inverted != other.inverted
    }
}

/// A finite word, not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[must_use]
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// True iff no adjacent pair cancels.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// True iff reduced and the last letter does not cancel the first.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) => self.0.len() == 1 || !l.cancels(f),
                _ => true,
            }
    }

    pub fn rotated(&self, offset: usize) -> Word {
        if self.0.is_empty() {
            return Word::default();
        }
        let k = offset % self.0.len();
        let mut v = Vec::with_capacity(self.0.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Formats the word with the given generator names, `x-` marking inverses.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayWord {
            letters: &self.0,
            names,
        }
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

struct DisplayWord<'a> {
    letters: &'a [Letter],
    names: &'a [String],
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match self.names.get(l.generator_id) {
                Some(n) => f.write_str(n)?,
                None => write!(f, "g{}", l.generator_id)?,
            }
            if l.inverted {
                f.write_str("-")?;
            }
        }
        Ok(())
    }
}

/// Freely reduces `w` with a single stack pass.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        match out.last() {
            Some(&top) if top.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

/// A non-empty cyclically reduced word stored in its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Word", into = "Word")]
pub struct CyclicWord(Word);

impl CyclicWord {
    /// Wraps an already cyclically reduced, non-empty word.
    pub fn from_reduced(w: Word) -> Option<Self> {
        if w.is_empty() || !w.is_cyclically_reduced() {
            return None;
        }
        Some(CyclicWord(least_rotation(&w)))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0 .0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letter at cyclic position `i`.
    pub fn at(&self, i: isize) -> Letter {
        let n = self.len() as isize;
        self.0 .0[i.rem_euclid(n) as usize]
    }

    #[must_use]
    pub fn inverse(&self) -> CyclicWord {
        CyclicWord(least_rotation(&self.0.inverse()))
    }

    /// Canonical key identifying the relator up to rotation and inversion.
    pub fn unoriented_key(&self) -> CyclicWord {
        let inv = self.inverse();
        if inv < *self {
            inv
        } else {
            self.clone()
        }
    }
}

impl TryFrom<Word> for CyclicWord {
    type Error = String;

    fn try_from(w: Word) -> Result<Self, Self::Error> {
        CyclicWord::from_reduced(w).ok_or_else(|| "word is empty or not cyclically reduced".into())
    }
}

impl From<CyclicWord> for Word {
    fn from(c: CyclicWord) -> Word {
        c.0
    }
}

fn least_rotation(w: &Word) -> Word {
    let n = w.len();
    let mut best = 0;
    for k in 1..n {
        let better = (0..n)
            .map(|i| (w.0[(k + i) % n], w.0[(best + i) % n]))
            .find(|(a, b)| a != b)
            .is_some_and(|(a, b)| a < b);
        if better {
            best = k;
        }
    }
    w.rotated(best)
}

/// Cyclically reduces `w`; `None` when it is trivial in the free group.
pub fn cyclic_reduce(w: &Word) -> Option<CyclicWord> {
    let r = free_reduce(w);
    let s = &r.0;
    let (mut lo, mut hi) = (0usize, s.len());
    while hi - lo >= 2 && s[lo].cancels(s[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    CyclicWord::from_reduced(Word(s[lo..hi].to_vec()))
}

/// Primitive root and exponent: `w = root^exponent` as cyclic words.
pub fn proper_power_root(w: &CyclicWord) -> (CyclicWord, usize) {
    let s = w.letters();
    let n = s.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (0..n).all(|i| s[i] == s[(i + p) % n]) {
            let root = CyclicWord::from_reduced(Word(s[..p].to_vec()))
                .expect("prefix of a cyclically reduced periodic word is cyclically reduced");
            return (root, n / p);
        }
    }
    unreachable!("the full length is always a period")
}

/// One element of the symmetrized relator set, tagged with where it came from.
///
/// With `inverted == false` the word reads the relator forward from boundary
/// vertex `rotation`; with `inverted == true` it reads the relator backwards
/// from that vertex, so its first letter is the inverse of the letter just
/// before `rotation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureElement {
    pub word: Word,
    pub relator_index: usize,
    pub rotation: usize,
    pub inverted: bool,
}

/// Reads `len` letters of relator `r` starting at boundary vertex `start`.
pub fn read_relator(r: &CyclicWord, start: usize, inverted: bool, len: usize) -> Word {
    let s = start as isize;
    Word(
        (0..len as isize)
            .map(|t| {
                if inverted {
                    r.at(s - 1 - t).inverse()
                } else {
                    r.at(s + t)
                }
            })
            .collect(),
    )
}

/// All cyclic permutations of all relators and their inverses, as a set.
pub fn symmetrized_closure(p: &Presentation) -> Vec<ClosureElement> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (ri, r) in p.relators.iter().enumerate() {
        for inverted in [false, true] {
            for rotation in 0..r.len() {
                let word = read_relator(r, rotation, inverted, r.len());
                if seen.insert(word.clone()) {
                    out.push(ClosureElement {
                        word,
                        relator_index: ri,
                        rotation,
                        inverted,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown generator `{name}`")]
    UnknownGenerator {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("relator {index} is trivial (freely reduces to the empty word)")]
    TrivialRelator { index: usize },
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("invalid JSON presentation: {0}")]
    Json(String),
}

/// A normalization step applied while building a [`Presentation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalizationEvent {
    Reduced {
        input_index: usize,
        from_length: usize,
        to_length: usize,
    },
    DeletedDuplicate {
        input_index: usize,
        duplicate_of: usize,
    },
}

impl fmt::Display for NormalizationEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizationEvent::Reduced {
                input_index,
                from_length,
                to_length,
            } => write!(
                f,
                "relator #{input_index}: cyclically reduced from length {from_length} to {to_length}"
            ),
            NormalizationEvent::DeletedDuplicate {
                input_index,
                duplicate_of,
            } => write!(
                f,
                "relator #{input_index}: deleted, duplicate of relator #{duplicate_of} up to rotation and inversion"
            ),
        }
    }
}

/// `⟨S | R⟩` with cyclically reduced, pairwise inequivalent relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generator_names: Vec<String>,
    pub relators: Vec<CyclicWord>,
    #[serde(default)]
    pub normalization_log: Vec<NormalizationEvent>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric())
}

impl Presentation {
    /// Builds a presentation, cyclically reducing and deduplicating relators.
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self, WordsError> {
        let mut names = HashSet::new();
        for n in &generator_names {
            if !valid_name(n) {
                return Err(WordsError::InvalidName(n.clone()));
            }
            if !names.insert(n.as_str()) {
                return Err(WordsError::DuplicateGenerator(n.clone()));
            }
        }
        let mut log = Vec::new();
        let mut kept: HashMap<CyclicWord, usize> = HashMap::new();
        let mut out = Vec::new();
        for (i, w) in relators.iter().enumerate() {
            if let Some(l) = w.0.iter().find(|l| l.generator_id >= generator_names.len()) {
                return Err(WordsError::UnknownGenerator {
                    name: format!("#{}", l.generator_id),
                    line: 0,
                    column: 0,
                });
            }
            let c = cyclic_reduce(w).ok_or(WordsError::TrivialRelator { index: i })?;
            if c.len() != w.len() {
                log.push(NormalizationEvent::Reduced {
                    input_index: i,
                    from_length: w.len(),
                    to_length: c.len(),
                });
            }
            if let Some(&j) = kept.get(&c.unoriented_key()) {
                log.push(NormalizationEvent::DeletedDuplicate {
                    input_index: i,
                    duplicate_of: j,
                });
                continue;
            }
            kept.insert(c.unoriented_key(), i);
            out.push(c);
        }
        Ok(Presentation {
            generator_names,
            relators: out,
            normalization_log: log,
        })
    }

    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    /// Minimum relator length `g` (0 when there are no relators).
    pub fn min_relator_length(&self) -> usize {
        self.relators.iter().map(CyclicWord::len).min().unwrap_or(0)
    }

    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(CyclicWord::len).sum()
    }

    /// Renders the presentation in the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("generators: {}\n", self.generator_names.join(" "));
        for r in &self.relators {
            s.push_str(&format!("relator: {}\n", r.word().display_with(&self.generator_names)));
        }
        s
    }

    pub fn relator_string(&self, i: usize) -> String {
        self.relators[i].word().display_with(&self.generator_names).to_string()
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn split_tokens(body: &str, line: usize, body_col: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &body[s..i],
                    line,
                    column: body_col + s,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &body[s..],
            line,
            column: body_col + s,
        });
    }
    out
}

/// Parses the line-oriented presentation format.
///
/// ```text
/// # genus-2 surface group
/// generators: a b c d
/// relator: a b a- b- c d c- d-
/// ```
pub fn parse_presentation(text: &str) -> Result<Presentation, WordsError> {
    let mut generators: Option<(Vec<String>, usize)> = None;
    let mut relator_lines: Vec<Vec<Token<'_>>> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = content.len() - trimmed.len();
        let Some(colon) = trimmed.find(':') else {
            return Err(WordsError::Syntax {
                line,
                column: lead + 1,
                message: "expected `generators:` or `relator:`".into(),
            });
        };
        let key = trimmed[..colon].trim_end();
        let body = &trimmed[colon + 1..];
        let body_col = lead + colon + 2;
        let tokens = split_tokens(body, line, body_col);
        match key {
            "generators" => {
                if generators.is_some() {
                    return Err(WordsError::Syntax {
                        line,
                        column: lead + 1,
                        message: "duplicate `generators:` line".into(),
                    });
                }
                let mut names = Vec::new();
                for t in &tokens {
                    if !valid_name(t.text) {
                        return Err(WordsError::Syntax {
                            line: t.line,
                            column: t.column,
                            message: format!("invalid generator name `{}`", t.text),
                        });
                    }
                    names.push(t.text.to_string());
                }
                if names.is_empty() {
                    return Err(WordsError::Syntax {
                        line,
                        column: body_col,
                        message: "no generators listed".into(),
                    });
                }
                generators = Some((names, line));
            }
            "relator" => relator_lines.push(tokens),
            other => {
                return Err(WordsError::Syntax {
                    line,
                    column: lead + 1,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }

    let Some((names, _)) = generators else {
        return Err(WordsError::Syntax {
            line: 1,
            column: 1,
            message: "missing `generators:` line".into(),
        });
    };
    if relator_lines.is_empty() {
        return Err(WordsError::Syntax {
            line: text.lines().count().max(1),
            column: 1,
            message: "no `relator:` lines".into(),
        });
    }

    let mut words = Vec::new();
    for (idx, tokens) in relator_lines.iter().enumerate() {
        if tokens.is_empty() {
            return Err(WordsError::TrivialRelator { index: idx });
        }
        let mut letters = Vec::new();
        for t in tokens {
            let (name, inverted) = match t.text.strip_suffix('-') {
                Some(n) => (n, true),
                None => (t.text, false),
            };
            if !valid_name(name) {
                return Err(WordsError::Syntax {
                    line: t.line,
                    column: t.column,
                    message: format!("malformed token `{}`", t.text),
                });
            }
            let gid = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| WordsError::UnknownGenerator {
                    name: name.to_string(),
                    line: t.line,
                    column: t.column,
                })?;
            letters.push(Letter::new(gid, inverted));
        }
        words.push(Word(letters));
    }
    Presentation::new(names, words)
}

#[derive(Deserialize)]
struct JsonPresentation {
    generators: Vec<String>,
    relators: Vec<Vec<String>>,
}

/// Parses the structured equivalent: `{"generators": [...], "relators": [[...], ...]}`.
pub fn parse_presentation_json(text: &str) -> Result<Presentation, WordsError> {
    let jp: JsonPresentation =
        serde_json::from_str(text).map_err(|e| WordsError::Json(e.to_string()))?;
    let mut words = Vec::new();
    for (ri, r) in jp.relators.iter().enumerate() {
        let mut letters = Vec::new();
        for (ti, tok) in r.iter().enumerate() {
            let (name, inverted) = match tok.strip_suffix('-') {
                Some(n) => (n, true),
                None => (tok.as_str(), false),
            };
            let gid = jp
                .generators
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| WordsError::UnknownGenerator {
                    name: name.to_string(),
                    line: ri + 1,
                    column: ti + 1,
                })?;
            letters.push(Letter::new(gid, inverted));
        }
        words.push(Word(letters));
    }
    Presentation::new(jp.generators, words)
}

/// Dispatches on the file name: `.json` uses the structured format.
pub fn parse_presentation_named(file_name: &str, text: &str) -> Result<Presentation, WordsError> {
    if file_name.ends_with(".json") {
        parse_presentation_json(text)
    } else {
        parse_presentation(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(spec: &[(usize, bool)]) -> Word {
        Word(spec.iter().map(|&(g, i)| Letter::new(g, i)).collect())
    }

    const A: (usize, bool) = (0, false);
    const AI: (usize, bool) = (0, true);
    const B: (usize, bool) = (1, false);
    const BI: (usize, bool) = (1, true);

    #[test]
    fn parse_commutator() {
        let p = parse_presentation("generators: a b\nrelator: a b a- b-").unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.relators[0].len(), 4);
    }

    #[test]
    fn parse_forced_cancellation() {
        let p = parse_presentation("generators: a\nrelator: a a- a").unwrap();
        assert_eq!(p.relators[0].letters(), &[Letter::gen(0)]);
        assert_eq!(p.normalization_log.len(), 1);
    }

    #[test]
    fn parse_genus_two() {
        let p =
            parse_presentation("generators: a b c d\nrelator: a b a- b- c d c- d-").unwrap();
        assert_eq!(p.relators[0].len(), 8);
        assert_eq!(p.min_relator_length(), 8);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_presentation("generators: a b\nrelator: a c").unwrap_err();
        assert_eq!(
            e,
            WordsError::UnknownGenerator {
                name: "c".into(),
                line: 2,
                column: 12
            }
        );
        let e = parse_presentation("generators: a b\n  bogus line").unwrap_err();
        assert!(matches!(e, WordsError::Syntax { line: 2, column: 3, .. }));
        let e = parse_presentation("generators: a b\nrelator: a a-").unwrap_err();
        assert_eq!(e, WordsError::TrivialRelator { index: 0 });
        let e = parse_presentation("generators: a b\nrelator: a b--").unwrap_err();
        assert!(matches!(e, WordsError::Syntax { line: 2, .. }));
        assert!(parse_presentation("relator: a").is_err());
        assert!(parse_presentation("generators: a a\nrelator: a").is_err());
    }

    #[test]
    fn comments_and_json() {
        let t = "# comment\ngenerators: x y  # trailing\n\nrelator: x y x y- # c\n";
        let p = parse_presentation(t).unwrap();
        assert_eq!(p.relators[0].len(), 4);
        let j = r#"{"generators": ["x", "y"], "relators": [["x", "y", "x", "y-"]]}"#;
        assert_eq!(parse_presentation_named("p.json", j).unwrap(), p);
        assert!(parse_presentation_json("{").is_err());
    }

    #[test]
    fn duplicates_are_deleted() {
        let t = "generators: a b\nrelator: a b a- b-\nrelator: b a b- a-\nrelator: b- a b a-";
        let p = parse_presentation(t).unwrap();
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.normalization_log.len(), 2);
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(free_reduce(&w(&[A, B, BI, A])), w(&[A, A]));
        assert_eq!(free_reduce(&Word::default()), Word::default());
        assert_eq!(free_reduce(&w(&[A, B, AI, A, BI, AI])), Word::default());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let c = cyclic_reduce(&w(&[BI, A, B, B])).unwrap();
        assert_eq!(c, CyclicWord::from_reduced(w(&[A, B])).unwrap());
        let comm = w(&[A, B, AI, BI]);
        assert_eq!(cyclic_reduce(&comm).unwrap().len(), 4);
        assert_eq!(
            cyclic_reduce(&w(&[AI, B, A])).unwrap().letters(),
            &[Letter::gen(1)]
        );
        assert!(cyclic_reduce(&w(&[A, AI])).is_none());
    }

    #[test]
    fn closure_counts() {
        let p = parse_presentation("generators: a b\nrelator: a b a- b-").unwrap();
        assert_eq!(symmetrized_closure(&p).len(), 8);
        let p = parse_presentation("generators: a b c\nrelator: a b c b").unwrap();
        assert_eq!(symmetrized_closure(&p).len(), 8);
        let empty = Presentation::new(vec!["a".into()], vec![]).unwrap();
        assert!(symmetrized_closure(&empty).is_empty());
    }

    #[test]
    fn proper_powers() {
        let ab3 = CyclicWord::from_reduced(w(&[A, B, A, B, A, B])).unwrap();
        let (root, e) = proper_power_root(&ab3);
        assert_eq!((root.len(), e), (2, 3));
        let comm = CyclicWord::from_reduced(w(&[A, B, AI, BI])).unwrap();
        assert_eq!(proper_power_root(&comm), (comm.clone(), 1));
        let a6 = CyclicWord::from_reduced(w(&[A; 6])).unwrap();
        assert_eq!(proper_power_root(&a6).1, 6);
    }
}
