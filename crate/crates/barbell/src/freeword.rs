//! Free-group words over the barbell alphabet {B, R, t, u}, the word input
//! language, double-coset normalization and scanning-disk crossing counts.
//!
//! A barbell in `\natural_m S^1 x D^3` (m = 1, 2) is encoded by a word in the
//! free group on the cuff meridians `B`, `R` and the circle factors `t` (and
//! `u` for m = 2). Words that start with `B` or end with `R` describe the same
//! barbell after an isotopy dragging the cuff out of the bar, so parsing
//! normalizes to the double coset representative.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Generators of the ambient free group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    /// Meridian of the blue cuff sphere.
    B,
    /// Meridian of the red cuff sphere.
    R,
    /// Circle factor of the first summand.
    T,
    /// Circle factor of the second summand (m = 2 only).
    U,
}

impl Gen {
    pub fn symbol(self) -> char {
        match self {
            Gen::B => 'B',
            Gen::R => 'R',
            Gen::T => 't',
            Gen::U => 'u',
        }
    }

    fn from_char(c: char) -> Option<Gen> {
        match c {
            'B' => Some(Gen::B),
            'R' => Some(Gen::R),
            't' => Some(Gen::T),
            'u' => Some(Gen::U),
            _ => None,
        }
    }

    pub fn is_cuff(self) -> bool {
        matches!(self, Gen::B | Gen::R)
    }
}

/// Errors from the word input language.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator in token `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in token `{0}` (expected `^` followed by a nonzero integer)")]
    MalformedExponent(String),
    #[error("generator `u` is not available for m=1")]
    GeneratorUInM1,
    #[error("ambient summand count must be 1 or 2, got {0}")]
    BadAmbient(u8),
    #[error("word exceeds the supported total letter length (2^31)")]
    WordTooLong,
}

/// Errors from crossing counts and type classification.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrossingError {
    #[error("m=2 word has u-winding between the cuffs; the cuff-drag isotopy would move a cuff through the scanning disk")]
    CuffPlacementUnsupported,
}

/// A freely reduced word: adjacent syllables carry distinct generators and no
/// exponent is zero. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ReducedWord {
    syllables: Vec<(Gen, i64)>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord::default()
    }

    /// Builds a word from raw syllables, merging and cancelling as needed.
    pub fn from_syllables<I: IntoIterator<Item = (Gen, i64)>>(iter: I) -> Self {
        let mut w = ReducedWord::identity();
        for (g, e) in iter {
            w.push(g, e);
        }
        w
    }

    pub fn generator(g: Gen, exp: i64) -> Self {
        Self::from_syllables([(g, exp)])
    }

    /// Appends `g^e`, keeping the word reduced.
    pub fn push(&mut self, g: Gen, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((lg, le)) if *lg == g => {
                *le = le.checked_add(e).expect("syllable exponent overflow");
                if *le == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((g, e)),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[(Gen, i64)] {
        &self.syllables
    }

    pub fn concat(&self, other: &ReducedWord) -> ReducedWord {
        let mut w = self.clone();
        for &(g, e) in &other.syllables {
            w.push(g, e);
        }
        w
    }

    /// Reverses the word and negates exponents; the group inverse.
    pub fn invert(&self) -> ReducedWord {
        ReducedWord {
            syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    /// Signed total exponent of generator `g`.
    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.syllables
            .iter()
            .filter(|(h, _)| *h == g)
            .map(|(_, e)| e)
            .sum()
    }

    /// Total letter length, i.e. the sum of |exponent| over syllables.
    pub fn letter_len(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn contains(&self, g: Gen) -> bool {
        self.syllables.iter().any(|(h, _)| *h == g)
    }

    pub fn count_syllables_of(&self, g: Gen) -> usize {
        self.syllables.iter().filter(|(h, _)| *h == g).count()
    }

    /// Swaps the two cuff generators. Research utility for bar reversal.
    pub fn swap_cuffs(&self) -> ReducedWord {
        ReducedWord {
            syllables: self
                .syllables
                .iter()
                .map(|&(g, e)| {
                    let g = match g {
                        Gen::B => Gen::R,
                        Gen::R => Gen::B,
                        other => other,
                    };
                    (g, e)
                })
                .collect(),
        }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(g, e) in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", g.symbol())?;
            } else {
                write!(f, "{}^{}", g.symbol(), e)?;
            }
        }
        Ok(())
    }
}

/// Parses a word in the grammar `word := syllable (WS syllable)* | ""`,
/// `syllable := gen ("^" int)?`, without any barbell normalization.
pub fn parse_reduced(text: &str) -> Result<ReducedWord, WordError> {
    let mut w = ReducedWord::identity();
    for tok in text.split_whitespace() {
        let mut chars = tok.chars();
        let head = chars
            .next()
            .expect("split_whitespace yields nonempty tokens");
        let g = Gen::from_char(head).ok_or_else(|| WordError::UnknownGenerator(tok.to_string()))?;
        let rest = chars.as_str();
        let e = if rest.is_empty() {
            1
        } else if let Some(num) = rest.strip_prefix('^') {
            match num.parse::<i64>() {
                Ok(0) | Err(_) => return Err(WordError::MalformedExponent(tok.to_string())),
                Ok(e) => e,
            }
        } else {
            return Err(WordError::UnknownGenerator(tok.to_string()));
        };
        w.push(g, e);
    }
    Ok(w)
}

/// A barbell word: freely reduced, double-coset normalized, with ambient m.
///
/// Words missing a `B` or `R` syllable are accepted but flagged degenerate;
/// their induced diffeomorphism has vanishing invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BarbellWord {
    word: ReducedWord,
    m: u8,
    degenerate: bool,
    normalized: bool,
}

impl BarbellWord {
    /// Normalizing constructor: strips a leading `B`-power and a trailing
    /// `R`-power (they do not change the barbell).
    pub fn new(mut word: ReducedWord, m: u8) -> Result<Self, WordError> {
        if m != 1 && m != 2 {
            return Err(WordError::BadAmbient(m));
        }
        if m == 1 && word.contains(Gen::U) {
            return Err(WordError::GeneratorUInM1);
        }
        // keeps every downstream i64 computation (exponent sums, factor
        // coefficients, T-polynomial exponents) overflow-free
        if word.letter_len() > 1 << 31 {
            return Err(WordError::WordTooLong);
        }
        if matches!(word.syllables.first(), Some((Gen::B, _))) {
            word.syllables.remove(0);
        }
        if matches!(word.syllables.last(), Some((Gen::R, _))) {
            word.syllables.pop();
        }
        let degenerate = !(word.contains(Gen::B) && word.contains(Gen::R));
        Ok(BarbellWord {
            word,
            m,
            degenerate,
            normalized: true,
        })
    }

    /// Non-normalizing constructor used for factorization sub-barbells, whose
    /// words keep cuff letters in place (e.g. `t^-1 B t^-6 R` from the
    /// sub-barbell table) even when a coset move could strip them.
    pub(crate) fn from_raw_parts(word: ReducedWord, m: u8) -> Result<Self, WordError> {
        if m != 1 && m != 2 {
            return Err(WordError::BadAmbient(m));
        }
        if m == 1 && word.contains(Gen::U) {
            return Err(WordError::GeneratorUInM1);
        }
        if word.letter_len() > 1 << 31 {
            return Err(WordError::WordTooLong);
        }
        let degenerate = !(word.contains(Gen::B) && word.contains(Gen::R));
        Ok(BarbellWord {
            word,
            m,
            degenerate,
            normalized: false,
        })
    }

    pub fn word(&self) -> &ReducedWord {
        &self.word
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Reverses the bar orientation: free inversion followed by swapping the
    /// cuff roles. The reversed barbell induces the inverse diffeomorphism.
    /// Exposed as a research utility; nothing downstream asserts its value.
    pub fn bar_reversed(&self) -> Result<BarbellWord, WordError> {
        BarbellWord::new(self.word.invert().swap_cuffs(), self.m)
    }

    /// Number of transverse intersections of the bar with the scanning disk.
    ///
    /// m=1 scans with `{s0} x D^3`: every unit of unsigned t-exponent crosses
    /// once. m=2 scans with the disk in the connected-sum neck: each u-syllable
    /// is an excursion into the second summand and crosses twice (entry and
    /// exit), independent of its exponent; t-syllables do not cross.
    pub fn crossing_count(&self) -> Result<u64, CrossingError> {
        match self.m {
            1 => Ok(self
                .word
                .syllables()
                .iter()
                .filter(|(g, _)| *g == Gen::T)
                .map(|(_, e)| e.unsigned_abs())
                .sum()),
            _ => {
                if m2_middle_has_u(&self.word) {
                    return Err(CrossingError::CuffPlacementUnsupported);
                }
                Ok(2 * self.word.count_syllables_of(Gen::U) as u64)
            }
        }
    }
}

/// Crossing count of a cuff-free segment with the `m`-appropriate disk.
pub(crate) fn segment_crossings(seg: &ReducedWord, m: u8) -> u64 {
    match m {
        1 => seg
            .syllables()
            .iter()
            .filter(|(g, _)| *g == Gen::T)
            .map(|(_, e)| e.unsigned_abs())
            .sum(),
        _ => 2 * seg.count_syllables_of(Gen::U) as u64,
    }
}

/// True when the word is a single `+1` B..R pair with u-winding in between,
/// which the neck-disk machinery cannot reduce.
fn m2_middle_has_u(word: &ReducedWord) -> bool {
    let cuffs: Vec<(usize, Gen, i64)> = word
        .syllables()
        .iter()
        .enumerate()
        .filter(|(_, (g, _))| g.is_cuff())
        .map(|(ix, &(g, e))| (ix, g, e))
        .collect();
    if let [(bi, Gen::B, 1), (ri, Gen::R, 1)] = cuffs[..] {
        return word.syllables()[bi + 1..ri]
            .iter()
            .any(|(g, _)| *g == Gen::U);
    }
    false
}

impl fmt::Display for BarbellWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// Parses the word input language and normalizes.
pub fn parse_word(text: &str, m: u8) -> Result<BarbellWord, WordError> {
    BarbellWord::new(parse_reduced(text)?, m)
}

/// The standard barbell family `theta_k(v, w)` in `S^1 x D^3`: the bar winds
/// the circle factor k-1 times negatively, `v` records red-cuff linking and
/// `w` blue-cuff linking per strand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSpec {
    k: u32,
    v: Vec<i64>,
    w: Vec<i64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error("theta_{k}(v, w) needs vectors of length {} but got |v| = {v_len}, |w| = {w_len}", k - 1)]
    BadVectorLength { k: u32, v_len: usize, w_len: usize },
    #[error("k must be at least 1")]
    BadK,
}

impl ThetaSpec {
    pub fn new(k: u32, v: Vec<i64>, w: Vec<i64>) -> Result<Self, ThetaError> {
        if k < 1 {
            return Err(ThetaError::BadK);
        }
        if v.len() != (k - 1) as usize || w.len() != (k - 1) as usize {
            return Err(ThetaError::BadVectorLength {
                k,
                v_len: v.len(),
                w_len: w.len(),
            });
        }
        Ok(ThetaSpec { k, v, w })
    }

    /// `theta_k(e_i, e_j)` with unit vectors.
    pub fn unit(k: u32, i: u32, j: u32) -> Result<Self, ThetaError> {
        if k < 1 || i == 0 || j == 0 || i > k - 1 || j > k - 1 {
            return Err(ThetaError::BadK);
        }
        let mut v = vec![0i64; (k - 1) as usize];
        let mut w = vec![0i64; (k - 1) as usize];
        v[(i - 1) as usize] = 1;
        w[(j - 1) as usize] = 1;
        ThetaSpec::new(k, v, w)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Expands to the word `R^{v_{k-1}} t^-1 B^{w_1} R^{v_{k-2}} t^-1 B^{w_2} ...`,
    /// then reduces and normalizes.
    pub fn to_word(&self) -> BarbellWord {
        let mut w = ReducedWord::identity();
        for l in (1..self.k).rev() {
            w.push(Gen::R, self.v[(l - 1) as usize]);
            w.push(Gen::T, -1);
            w.push(Gen::B, self.w[(self.k - 1 - l) as usize]);
        }
        BarbellWord::new(w, 1).expect("theta words are valid m=1 words")
    }
}

/// Convenience wrapper matching the operation name in the interface docs.
pub fn theta_to_word(spec: &ThetaSpec) -> BarbellWord {
    spec.to_word()
}
