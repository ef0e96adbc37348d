//! Pieces of a symmetrized presentation and the C'(1/6) conditions.
//!
//! A position in the symmetrized closure is a boundary vertex of a relator
//! disc together with a reading direction. The `2·|r|` closure elements that
//! describe the same place on the boundary of one disc collapse to a single
//! position, so a word is a piece exactly when it can be read at two
//! distinct positions. Occurrences are proper subwords of their relator
//! (length at most `|r| - 1`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::words::{proper_power_root, read_relator, Letter, Presentation, Word};

/// A place where a piece is read: relator, start vertex, direction, length.
///
/// Forward occurrences cover boundary vertices `offset ..= offset + length`;
/// inverted ones read backwards over `offset - length ..= offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    pub relator_index: usize,
    pub offset: usize,
    pub inverted: bool,
    pub length: usize,
}

impl Occurrence {
    /// Reads the occurrence back off the presentation.
    pub fn read(&self, p: &Presentation) -> Word {
        read_relator(&p.relators[self.relator_index], self.offset, self.inverted, self.length)
    }

    /// Boundary vertex reached after `j` letters of the piece.
    pub fn vertex(&self, j: usize, relator_len: usize) -> usize {
        let n = relator_len as isize;
        let o = self.offset as isize;
        let v = if self.inverted { o - j as isize } else { o + j as isize };
        v.rem_euclid(n) as usize
    }

    /// Lowest boundary vertex of the covered interval (cyclically).
    pub fn first_vertex(&self, relator_len: usize) -> usize {
        if self.inverted {
            self.vertex(self.length, relator_len)
        } else {
            self.offset
        }
    }

    /// The same segment read in the opposite direction (spelling the inverse word).
    pub fn reversed(&self, relator_len: usize) -> Occurrence {
        Occurrence {
            relator_index: self.relator_index,
            offset: self.vertex(self.length, relator_len),
            inverted: !self.inverted,
            length: self.length,
        }
    }
}

/// A maximal piece with every position at which it can be read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub word: Word,
    pub occurrences: Vec<Occurrence>,
    pub maximal: bool,
}

impl Piece {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Position {
    relator: usize,
    vertex: usize,
    inverted: bool,
}

struct Reader<'a> {
    p: &'a Presentation,
}

impl Reader<'_> {
    /// Longest readable length at any position of this relator.
    fn cap(&self, pos: Position) -> usize {
        self.p.relators[pos.relator].len() - 1
    }

    fn letter(&self, pos: Position, t: usize) -> Letter {
        let r = &self.p.relators[pos.relator];
        let v = pos.vertex as isize;
        if pos.inverted {
            r.at(v - 1 - t as isize).inverse()
        } else {
            r.at(v + t as isize)
        }
    }

    fn preceding(&self, pos: Position) -> Letter {
        let r = &self.p.relators[pos.relator];
        let v = pos.vertex as isize;
        if pos.inverted {
            r.at(v).inverse()
        } else {
            r.at(v - 1)
        }
    }

    /// Single-letter extension shared by every position, if any.
    fn common_extension(&self, group: &[Position], len: usize, left: bool) -> Option<Letter> {
        let mut shared = None;
        for &pos in group {
            if len + 1 > self.cap(pos) {
                return None;
            }
            let l = if left {
                self.preceding(pos)
            } else {
                self.letter(pos, len)
            };
            match shared {
                None => shared = Some(l),
                Some(s) if s != l => return None,
                _ => {}
            }
        }
        shared
    }
}

fn all_positions(p: &Presentation) -> Vec<Position> {
    let mut out = Vec::with_capacity(2 * p.total_relator_length());
    for (relator, r) in p.relators.iter().enumerate() {
        for vertex in 0..r.len() {
            for inverted in [false, true] {
                out.push(Position {
                    relator,
                    vertex,
                    inverted,
                });
            }
        }
    }
    out
}

fn to_piece(word: Word, group: &[Position]) -> Piece {
    let len = word.len();
    let mut occurrences: Vec<Occurrence> = group
        .iter()
        .map(|pos| Occurrence {
            relator_index: pos.relator,
            offset: pos.vertex,
            inverted: pos.inverted,
            length: len,
        })
        .collect();
    occurrences.sort();
    Piece {
        word,
        occurrences,
        maximal: true,
    }
}

/// All maximal pieces, each listed once in its lexicographically smaller
/// orientation (a piece `w` and `w⁻¹` describe the same boundary paths).
///
/// Positions are refined letter by letter, like walking a suffix trie of the
/// doubled relators; a node with at least two positions whose common word
/// cannot be extended uniformly on either side is a maximal piece.
pub fn enumerate_pieces(p: &Presentation) -> Vec<Piece> {
    let reader = Reader { p };
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<Position>, Vec<Letter>)> = vec![(all_positions(p), Vec::new())];

    while let Some((group, prefix)) = stack.pop() {
        let len = prefix.len();
        if len > 0
            && reader.common_extension(&group, len, true).is_none()
            && reader.common_extension(&group, len, false).is_none()
        {
            let word = Word(prefix.clone());
            let inv = word.inverse();
            if word < inv {
                out.push(to_piece(word, &group));
            }
        }
        let mut children: BTreeMap<Letter, Vec<Position>> = BTreeMap::new();
        for &pos in &group {
            if len < reader.cap(pos) {
                children.entry(reader.letter(pos, len)).or_default().push(pos);
            }
        }
        for (letter, child) in children {
            if child.len() >= 2 {
                let mut w = prefix.clone();
                w.push(letter);
                stack.push((child, w));
            }
        }
    }
    out.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
    out
}

/// An exact rational, used for piece-to-relator length ratios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub numerator: usize,
    pub denominator: usize,
}

impl Ratio {
    pub fn as_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// `self < 1/6`, exactly.
    pub fn below_one_sixth(self) -> bool {
        6 * self.numerator < self.denominator
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallCancellationReport {
    /// Minimum relator length.
    pub g: usize,
    pub max_piece_length: usize,
    pub num_maximal_pieces: usize,
    /// Longest piece on each relator over that relator's length.
    pub per_relator_max_ratio: Vec<Ratio>,
    pub proper_power_flags: Vec<bool>,
    pub passes_c16: bool,
    pub passes_uniform: bool,
    /// Set when `g < 7`: only piece-free presentations can pass then.
    pub short_relators: bool,
}

impl SmallCancellationReport {
    /// Human-readable reason for failing the uniform condition, if it fails.
    pub fn uniform_failure(&self) -> Option<String> {
        if self.passes_uniform {
            return None;
        }
        if let Some(i) = self.proper_power_flags.iter().position(|&f| f) {
            return Some(format!("proper power: relator #{i} is a proper power"));
        }
        if self.g == 0 {
            return Some("no relators".into());
        }
        Some(format!(
            "piece of length {} is not shorter than g/6 = {}/6",
            self.max_piece_length, self.g
        ))
    }
}

/// Computes `g`, piece lengths and both small cancellation verdicts.
pub fn check_conditions(p: &Presentation) -> SmallCancellationReport {
    let pieces = enumerate_pieces(p);
    check_conditions_with(p, &pieces)
}

/// As [`check_conditions`], reusing an already computed piece list.
pub fn check_conditions_with(p: &Presentation, pieces: &[Piece]) -> SmallCancellationReport {
    let g = p.min_relator_length();
    let mut longest = vec![0usize; p.relators.len()];
    let mut passes_c16 = !p.relators.is_empty();
    for piece in pieces {
        for occ in &piece.occurrences {
            let i = occ.relator_index;
            longest[i] = longest[i].max(piece.len());
            if 6 * piece.len() >= p.relators[i].len() {
                passes_c16 = false;
            }
        }
    }
    let max_piece_length = pieces.iter().map(Piece::len).max().unwrap_or(0);
    let proper_power_flags: Vec<bool> =
        p.relators.iter().map(|r| proper_power_root(r).1 > 1).collect();
    let passes_uniform = !p.relators.is_empty()
        && 6 * max_piece_length < g
        && !proper_power_flags.iter().any(|&f| f);
    SmallCancellationReport {
        g,
        max_piece_length,
        num_maximal_pieces: pieces.len(),
        per_relator_max_ratio: longest
            .iter()
            .zip(&p.relators)
            .map(|(&l, r)| Ratio {
                numerator: l,
                denominator: r.len(),
            })
            .collect(),
        proper_power_flags,
        passes_c16,
        passes_uniform,
        short_relators: g < 7,
    }
}
