//! Path-word algebra for the Seifert-surface lasso decomposition.
//!
//! A knotted loop spanning a genus-g Seifert surface decomposes, on the
//! standard form of the surface (a disk with 2g strips), into segment
//! words over generators C₀, C₁, …: the boundary reads
//!
//! ```text
//!     C = (Π_{k=0}^{g−1} C_{10k+9} C_{10k+7} C_{10k+4} C_{10k+1}) · C₀     (g ≥ 1)
//!     C = C₀                                                               (g = 0)
//! ```
//!
//! while the lasso form strings conjugated handle blocks
//! S_{4k+1..4k+4} — each a four-segment word — as
//! Π_k C_{10k+6} S_{4k+4} C_{10k+3}⁻¹ S_{4k+3} C_{10k+6}⁻¹ S_{4k+2} C_{10k+3} S_{4k+1}.
//! Products follow the leftmost-acts-last convention throughout, and words
//! are stored in written order: `letters[0]` is the leftmost (last-acting)
//! factor. The two forms are equal in the free group on the segment
//! generators, with a single convention C_{10g} = 1 applied at the top
//! handle k = g−1; for interior k the C_{10k+10} stay genuine letters and
//! cancel in conjugate pairs across adjacent handle blocks. Free reduction
//! is the oracle: [`verify_decomposition`] substitutes the S-blocks,
//! reduces, and reports every cancellation.

use crate::algebra::{AlgebraError, GroupElement};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Largest genus [`verify_decomposition`] accepts (word growth is linear,
/// the cap just keeps traces auditable).
pub const MAX_GENUS: u32 = 8;

#[derive(Debug, Error)]
pub enum KnotError {
    #[error("generator {0:?} has no assigned group element")]
    UnassignedGenerator(String),
    #[error("empty word needs at least one assignment to fix the representation")]
    EmptyAssignment,
    #[error("genus {genus} exceeds the verification cap {max}")]
    GenusTooLarge { genus: u32, max: u32 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// One generator occurrence: `exp` is +1 or −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub id: String,
    pub exp: i8,
}

impl Letter {
    pub fn gen(id: impl Into<String>) -> Self {
        Self { id: id.into(), exp: 1 }
    }
    pub fn inv(id: impl Into<String>) -> Self {
        Self { id: id.into(), exp: -1 }
    }
    pub fn inverse(&self) -> Self {
        Self { id: self.id.clone(), exp: -self.exp }
    }
    fn cancels(&self, other: &Letter) -> bool {
        self.id == other.id && self.exp == -other.exp
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.id)
        } else {
            write!(f, "{}^-1", self.id)
        }
    }
}

/// A word in the free group, letters in written order (letters[0] acts last).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathWord {
    pub letters: Vec<Letter>,
}

impl PathWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }
    pub fn empty() -> Self {
        Self { letters: Vec::new() }
    }
    /// Convenience constructor from (id, exponent) pairs.
    pub fn from_pairs(pairs: &[(&str, i8)]) -> Self {
        Self {
            letters: pairs
                .iter()
                .map(|&(id, exp)| {
                    assert!(exp == 1 || exp == -1, "exponent must be ±1, got {exp}");
                    Letter { id: id.to_string(), exp }
                })
                .collect(),
        }
    }
    pub fn len(&self) -> usize {
        self.letters.len()
    }
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
    /// Formal inverse: reversed order, flipped exponents.
    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }
    /// Concatenation in written order (self to the left of other).
    pub fn concat(&self, other: &PathWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Self { letters }
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// One recorded cancellation: the pair of positions (in the word being
/// reduced, before any removals) whose letters annihilated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cancellation {
    pub id: String,
    pub left_pos: usize,
    pub right_pos: usize,
}

impl fmt::Display for Cancellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} · {}^-1 at ({}, {})", self.id, self.id, self.left_pos, self.right_pos)
    }
}

/// Free reduction with a full cancellation trace.
///
/// Stack scan: each incoming letter either annihilates the current top or
/// is pushed. The result is the free-group normal form — reduction is
/// confluent, so any elimination order lands on the same word.
pub fn reduce_traced(w: &PathWord) -> (PathWord, Vec<Cancellation>) {
    let mut stack: Vec<(Letter, usize)> = Vec::new();
    let mut trace = Vec::new();
    for (pos, letter) in w.letters.iter().enumerate() {
        match stack.last() {
            Some((top, top_pos)) if top.cancels(letter) => {
                trace.push(Cancellation { id: letter.id.clone(), left_pos: *top_pos, right_pos: pos });
                stack.pop();
            }
            _ => stack.push((letter.clone(), pos)),
        }
    }
    (PathWord::new(stack.into_iter().map(|(l, _)| l).collect()), trace)
}

/// Free reduction (normal form only).
pub fn reduce(w: &PathWord) -> PathWord {
    reduce_traced(w).0
}

/// The Seifert decomposition data for genus g.
#[derive(Clone, Debug)]
pub struct SeifertDecomposition {
    pub genus: u32,
    pub boundary_word: PathWord,
    /// handle blocks left as S-letters; substitute via `block_definitions`
    pub lasso_word: PathWord,
    pub block_definitions: BTreeMap<String, PathWord>,
}

/// Verification verdict with the audit trail.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub genus: u32,
    pub matches: bool,
    /// lasso word after block substitution, before reduction
    pub expanded: PathWord,
    pub reduced: PathWord,
    pub boundary: PathWord,
    pub trace: Vec<Cancellation>,
    /// first letter position where reduced and boundary diverge
    pub first_mismatch: Option<usize>,
}

fn c(n: u32) -> String {
    format!("C{n}")
}

fn s(n: u32) -> String {
    format!("S{n}")
}

/// Boundary and lasso words of the genus-g surface, with the S-block table.
pub fn seifert_words(g: u32) -> SeifertDecomposition {
    if g == 0 {
        let word = PathWord::new(vec![Letter::gen(c(0))]);
        return SeifertDecomposition {
            genus: 0,
            boundary_word: word.clone(),
            lasso_word: word,
            block_definitions: BTreeMap::new(),
        };
    }
    let mut boundary = Vec::new();
    let mut lasso = Vec::new();
    let mut defs = BTreeMap::new();
    for k in (0..g).rev() {
        let b = 10 * k;
        for off in [9, 7, 4, 1] {
            boundary.push(Letter::gen(c(b + off)));
        }
        // S_{4k+4} = C_{10k+6}⁻¹ C_{10k+10}⁻¹ C_{10k+9} C_{10k+8},
        // with C_{10g} = 1 dropping the second letter at the top handle
        let mut s4 = vec![Letter::inv(c(b + 6))];
        if k != g - 1 {
            s4.push(Letter::inv(c(b + 10)));
        }
        s4.push(Letter::gen(c(b + 9)));
        s4.push(Letter::gen(c(b + 8)));
        defs.insert(s(4 * k + 4), PathWord::new(s4));
        defs.insert(
            s(4 * k + 3),
            PathWord::new(vec![
                Letter::gen(c(b + 3)),
                Letter::inv(c(b + 8)),
                Letter::gen(c(b + 7)),
                Letter::gen(c(b + 5)),
            ]),
        );
        defs.insert(
            s(4 * k + 2),
            PathWord::new(vec![
                Letter::gen(c(b + 6)),
                Letter::inv(c(b + 5)),
                Letter::gen(c(b + 4)),
                Letter::gen(c(b + 2)),
            ]),
        );
        defs.insert(
            s(4 * k + 1),
            PathWord::new(vec![
                Letter::inv(c(b + 3)),
                Letter::inv(c(b + 2)),
                Letter::gen(c(b + 1)),
                Letter::gen(c(b)),
            ]),
        );
        lasso.extend([
            Letter::gen(c(b + 6)),
            Letter::gen(s(4 * k + 4)),
            Letter::inv(c(b + 3)),
            Letter::gen(s(4 * k + 3)),
            Letter::inv(c(b + 6)),
            Letter::gen(s(4 * k + 2)),
            Letter::gen(c(b + 3)),
            Letter::gen(s(4 * k + 1)),
        ]);
    }
    boundary.push(Letter::gen(c(0)));
    SeifertDecomposition {
        genus: g,
        boundary_word: PathWord::new(boundary),
        lasso_word: PathWord::new(lasso),
        block_definitions: defs,
    }
}

/// Substitute block definitions into a word (one pass; definitions are
/// plain segment words, inverse occurrences get the inverted definition).
pub fn expand_blocks(w: &PathWord, defs: &BTreeMap<String, PathWord>) -> PathWord {
    let mut letters = Vec::new();
    for letter in &w.letters {
        match defs.get(&letter.id) {
            Some(def) => {
                let block = if letter.exp == 1 { def.clone() } else { def.inverse() };
                letters.extend(block.letters);
            }
            None => letters.push(letter.clone()),
        }
    }
    PathWord::new(letters)
}

/// Check a given decomposition: substitute, reduce, compare to the boundary.
pub fn verify_with(decomp: &SeifertDecomposition) -> VerificationReport {
    let expanded = expand_blocks(&decomp.lasso_word, &decomp.block_definitions);
    let (reduced, trace) = reduce_traced(&expanded);
    let boundary = reduce(&decomp.boundary_word);
    let matches = reduced == boundary;
    let first_mismatch = if matches {
        None
    } else {
        let shared = reduced
            .letters
            .iter()
            .zip(&boundary.letters)
            .take_while(|(a, b)| a == b)
            .count();
        Some(shared)
    };
    VerificationReport {
        genus: decomp.genus,
        matches,
        expanded,
        reduced,
        boundary,
        trace,
        first_mismatch,
    }
}

/// Build and check the genus-g decomposition (g ≤ [`MAX_GENUS`]).
pub fn verify_decomposition(g: u32) -> Result<VerificationReport, KnotError> {
    if g > MAX_GENUS {
        return Err(KnotError::GenusTooLarge { genus: g, max: MAX_GENUS });
    }
    Ok(verify_with(&seifert_words(g)))
}

/// Evaluate a word in a representation: the ordered product of the assigned
/// unitaries, leftmost letter acting last. Reduction never changes the
/// value (cancelling letters multiply to the identity).
pub fn holonomy_of_word(
    w: &PathWord,
    assignment: &BTreeMap<String, GroupElement>,
) -> Result<GroupElement, KnotError> {
    let rep = assignment
        .values()
        .next()
        .map(|g| g.rep().clone())
        .ok_or(KnotError::EmptyAssignment)?;
    let mut acc = GroupElement::identity(rep);
    for letter in &w.letters {
        let base = assignment
            .get(&letter.id)
            .ok_or_else(|| KnotError::UnassignedGenerator(letter.id.clone()))?;
        let factor = if letter.exp == 1 { base.clone() } else { base.inverse() };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}
