//! Annular link diagrams as cyclic words of elementary slices.
//!
//! A diagram is read bottom to top. Strands entering the first slice cross
//! the seam of the annulus; traversing such a strand upward contributes `+1`
//! to a circle's winding number.

mod parse;
mod permute;
pub(crate) mod resolve;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use permute::CrossingPermutation;
pub use parse::{parse_braid, parse_braid_file, parse_slice_file, InputKind};
pub use resolve::{
    crossing_effect, resolve, Circle, CircleMap, CrossingEffect, EffectKind, ResolutionDiagram,
    Resolver, Smoothing, SurgeryCase,
};

/// Largest crossing count accepted by the state cube (bit-packed states).
pub const MAX_CROSSINGS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

/// A braid generator `σ_i^{±1}`, with `index` in `1..strands`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidLetter {
    pub index: usize,
    pub sign: Sign,
}

impl BraidLetter {
    pub fn new(index: usize, sign: Sign) -> Self {
        BraidLetter { index, sign }
    }

    pub fn inverse(self) -> Self {
        BraidLetter::new(self.index, self.sign.flip())
    }

    /// Signed integer token, e.g. `-2` for `σ₂⁻¹`.
    pub fn token(self) -> i64 {
        self.index as i64 * self.sign.value()
    }
}

/// A braid word on `strands` strands. Crossing `i` of the closure is letter `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::NoStrands(0));
        }
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(Error::LetterOutOfRange {
                    letter: l.token(),
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Builds a word from signed tokens, panicking on invalid input.
    /// Intended for literals in tests and examples.
    pub fn from_tokens(strands: usize, tokens: &[i64]) -> Self {
        let letters = tokens
            .iter()
            .map(|&t| {
                let sign = if t > 0 { Sign::Positive } else { Sign::Negative };
                BraidLetter::new(t.unsigned_abs() as usize, sign)
            })
            .collect();
        BraidWord::new(strands, letters).expect("invalid braid literal")
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn n_plus(&self) -> usize {
        self.letters.iter().filter(|l| l.sign == Sign::Positive).count()
    }

    pub fn n_minus(&self) -> usize {
        self.letters.iter().filter(|l| l.sign == Sign::Negative).count()
    }

    /// Self-linking number `-b + n₊ - n₋` of the transverse closure.
    pub fn self_linking(&self) -> i64 {
        -(self.strands as i64) + self.n_plus() as i64 - self.n_minus() as i64
    }

    pub fn tokens(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.token()).collect()
    }

    /// Cyclic rotation moving the first `k` letters to the end (a conjugation).
    pub fn rotate(&self, k: usize) -> BraidWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// Positive stabilization: add strand `b+1` and append `σ_b`.
    pub fn stabilize(&self) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.push(BraidLetter::new(self.strands, Sign::Positive));
        BraidWord {
            strands: self.strands + 1,
            letters,
        }
    }

    /// Inserts `letter · letter⁻¹` before position `at`.
    pub fn insert_cancelling_pair(&self, at: usize, letter: BraidLetter) -> Result<BraidWord> {
        let mut letters = self.letters.clone();
        let at = at.min(letters.len());
        letters.splice(at..at, [letter, letter.inverse()]);
        BraidWord::new(self.strands, letters)
    }

    pub fn to_slice_word(&self) -> SliceWord {
        let slices = self
            .letters
            .iter()
            .map(|l| Slice::Cross {
                position: l.index,
                sign: l.sign,
            })
            .collect();
        SliceWord::new(self.strands, slices, None).expect("braid words embed as slice words")
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={} [", self.strands)?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l.token())?;
        }
        write!(f, "]")
    }
}

/// Free function form of [`BraidWord::to_slice_word`].
pub fn to_slice_word(w: &BraidWord) -> SliceWord {
    w.to_slice_word()
}

/// One elementary slice. Positions are 1-based strand positions in the level
/// below the slice (for `Cup`, the position of the new left strand above).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slice {
    /// Crossing between strands `position` and `position + 1`. The sign is the
    /// crossing type: the sign the crossing has when both strands point up.
    Cross { position: usize, sign: Sign },
    Cup { position: usize },
    Cap { position: usize },
}

/// A closed annular diagram: `seam_count` strands cross the seam, and the
/// slices are stacked on top of each other until the strands close up.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceWord {
    seam_count: usize,
    slices: Vec<Slice>,
    orientations: Vec<bool>,
    crossing_order: Vec<usize>,
    crossing_slices: Vec<usize>,
    components: usize,
}

impl SliceWord {
    /// Validates the word. `orientations` holds one flag per link component
    /// (`true` keeps the canonical direction, which runs upward along the
    /// component's first edge in the bottom-to-top, left-to-right sweep).
    /// `None` means every component keeps its canonical direction.
    pub fn new(seam_count: usize, slices: Vec<Slice>, orientations: Option<Vec<bool>>) -> Result<Self> {
        let mut count = seam_count;
        for (t, s) in slices.iter().enumerate() {
            let slice = t + 1;
            match *s {
                Slice::Cross { position, .. } => {
                    if count < 2 {
                        return Err(Error::InvalidSlice {
                            slice,
                            message: format!("crossing needs two strands, {count} present"),
                        });
                    }
                    if position == 0 || position >= count {
                        return Err(Error::InvalidSlice {
                            slice,
                            message: format!("crossing position {position} outside 1..{}", count - 1),
                        });
                    }
                }
                Slice::Cup { position } => {
                    if position == 0 || position > count + 1 {
                        return Err(Error::InvalidSlice {
                            slice,
                            message: format!("cup position {position} outside 1..{}", count + 1),
                        });
                    }
                    count += 2;
                }
                Slice::Cap { position } => {
                    if count < 2 || position == 0 || position >= count {
                        return Err(Error::InvalidSlice {
                            slice,
                            message: format!("cap position {position} invalid with {count} strands"),
                        });
                    }
                    count -= 2;
                }
            }
        }
        if count != seam_count {
            return Err(Error::NotClosed {
                expected: seam_count,
                found: count,
            });
        }
        let crossing_slices: Vec<usize> = slices
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Slice::Cross { .. }))
            .map(|(t, _)| t)
            .collect();
        if crossing_slices.len() > MAX_CROSSINGS {
            return Err(Error::TooManyCrossings(crossing_slices.len()));
        }
        let mut word = SliceWord {
            seam_count,
            slices,
            orientations: Vec::new(),
            crossing_order: (0..crossing_slices.len()).collect(),
            crossing_slices,
            components: 0,
        };
        let components = resolve::Topology::new(&word).components();
        let orientations = orientations.unwrap_or_else(|| vec![true; components]);
        if orientations.len() != components {
            return Err(Error::Orientation {
                expected: components,
                found: orientations.len(),
            });
        }
        word.components = components;
        word.orientations = orientations;
        Ok(word)
    }

    /// Same diagram with crossing `k` of the sign assignment being the
    /// `order[k]`-th crossing slice (0-based).
    pub fn with_crossing_order(&self, order: &[usize]) -> Result<SliceWord> {
        let n = self.crossing_slices.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::CrossingOrder(format!("expected {n} entries, got {}", order.len())));
        }
        for &o in order {
            if o >= n || seen[o] {
                return Err(Error::CrossingOrder(format!("{order:?} is not a permutation of 0..{n}")));
            }
            seen[o] = true;
        }
        let mut w = self.clone();
        w.crossing_order = order.to_vec();
        Ok(w)
    }

    pub fn seam_count(&self) -> usize {
        self.seam_count
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn orientations(&self) -> &[bool] {
        &self.orientations
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Number of crossings `n`.
    pub fn crossings(&self) -> usize {
        self.crossing_slices.len()
    }

    pub fn crossing_order(&self) -> &[usize] {
        &self.crossing_order
    }

    /// Slice index of crossing `k` in sign-assignment order.
    pub fn crossing_slice(&self, k: usize) -> usize {
        self.crossing_slices[self.crossing_order[k]]
    }

    /// True when the word has no cups or caps, i.e. it is a braid closure.
    pub fn is_braid_like(&self) -> bool {
        self.slices.iter().all(|s| matches!(s, Slice::Cross { .. }))
    }

    /// Crossing signs in sign-assignment order, derived from orientations.
    pub fn crossing_signs(&self) -> Vec<Sign> {
        resolve::Topology::new(self).signs
    }

    pub fn n_plus(&self) -> usize {
        self.crossing_signs().iter().filter(|s| **s == Sign::Positive).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossing_signs().iter().filter(|s| **s == Sign::Negative).count()
    }

    /// The braid word this diagram encodes, if it is a braid closure with
    /// every strand pointing upward.
    pub fn as_braid(&self) -> Option<BraidWord> {
        if !self.is_braid_like() || self.seam_count == 0 {
            return None;
        }
        let topo = resolve::Topology::new(self);
        if !topo.all_upward() || self.crossing_order.iter().enumerate().any(|(i, &o)| i != o) {
            return None;
        }
        let letters = self
            .slices
            .iter()
            .map(|s| match *s {
                Slice::Cross { position, sign } => BraidLetter::new(position, sign),
                _ => unreachable!(),
            })
            .collect();
        BraidWord::new(self.seam_count, letters).ok()
    }

    /// Renders the word in the slice file format.
    pub fn to_slice_file(&self) -> String {
        let mut out = format!("{}\n", self.seam_count);
        for s in &self.slices {
            match *s {
                Slice::Cross { position, sign } => out.push_str(&format!("X {position} {}\n", sign.symbol())),
                Slice::Cup { position } => out.push_str(&format!("U {position}\n")),
                Slice::Cap { position } => out.push_str(&format!("A {position}\n")),
            }
        }
        if self.orientations.iter().any(|o| !o) {
            out.push('O');
            for o in &self.orientations {
                out.push_str(if *o { " +" } else { " -" });
            }
            out.push('\n');
        }
        out
    }
}

/// A cube vertex `α ∈ {0,1}^n`, bit `i` holding the smoothing of crossing `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    bits: u32,
    len: u8,
}

impl State {
    pub fn new(bits: u32, len: usize) -> Self {
        debug_assert!(len <= MAX_CROSSINGS && (len == 32 || bits >> len == 0));
        State { bits, len: len as u8 }
    }

    pub fn zero(len: usize) -> Self {
        State::new(0, len)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = 0u32;
        for (i, b) in bits.iter().enumerate() {
            if *b {
                v |= 1 << i;
            }
        }
        State::new(v, bits.len())
    }

    /// Parses a string such as `"01"`; character `i` is crossing `i`.
    pub fn parse(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| State::from_bools(&b))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn get(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn with(self, i: usize, value: bool) -> Self {
        let bits = if value { self.bits | 1 << i } else { self.bits & !(1 << i) };
        State::new(bits, self.len())
    }

    /// `|α|`, the number of 1-smoothings.
    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Parity of `Σ_{l<i} α_l`, the standard sign exponent at crossing `i`.
    pub fn sign_before(self, i: usize) -> i64 {
        if (self.bits & ((1u32 << i) - 1)).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn to_bools(self) -> Vec<bool> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl Serialize for State {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braid_embeds_as_cross_slices() {
        let w = BraidWord::from_tokens(3, &[1, -2]);
        let s = w.to_slice_word();
        assert_eq!(s.seam_count(), 3);
        assert_eq!(
            s.slices(),
            &[
                Slice::Cross { position: 1, sign: Sign::Positive },
                Slice::Cross { position: 2, sign: Sign::Negative }
            ]
        );
        assert!(s.orientations().iter().all(|o| *o));
        assert_eq!(s.as_braid(), Some(w));
    }

    #[test]
    fn empty_braid_embeds() {
        let s = BraidWord::from_tokens(1, &[]).to_slice_word();
        assert_eq!(s.seam_count(), 1);
        assert!(s.slices().is_empty());
        assert_eq!(s.crossings(), 0);
    }

    #[test]
    fn trefoil_embeds() {
        let s = BraidWord::from_tokens(2, &[1, 1, 1]).to_slice_word();
        assert_eq!(s.crossings(), 3);
        assert!(s
            .slices()
            .iter()
            .all(|x| *x == Slice::Cross { position: 1, sign: Sign::Positive }));
    }

    #[test]
    fn slice_word_must_close() {
        let err = SliceWord::new(0, vec![Slice::Cup { position: 1 }], None).unwrap_err();
        assert_eq!(err, Error::NotClosed { expected: 0, found: 2 });
        let ok = SliceWord::new(0, vec![Slice::Cup { position: 1 }, Slice::Cap { position: 1 }], None);
        assert!(ok.is_ok());
    }

    #[test]
    fn slice_positions_checked() {
        assert!(SliceWord::new(1, vec![Slice::Cross { position: 1, sign: Sign::Positive }], None).is_err());
        assert!(SliceWord::new(2, vec![Slice::Cap { position: 2 }], None).is_err());
        assert!(SliceWord::new(2, vec![Slice::Cup { position: 4 }], None).is_err());
    }

    #[test]
    fn state_sign_exponent() {
        let s = State::parse("1101").unwrap();
        assert_eq!(s.sign_before(0), 1);
        assert_eq!(s.sign_before(1), -1);
        assert_eq!(s.sign_before(2), 1);
        assert_eq!(s.sign_before(3), 1);
        assert_eq!(s.to_string(), "1101");
        assert_eq!(s.weight(), 3);
    }

    #[test]
    fn stabilization_appends_outer_generator() {
        let w = BraidWord::from_tokens(3, &[1, -2]).stabilize();
        assert_eq!(w.strands(), 4);
        assert_eq!(w.tokens(), vec![1, -2, 3]);
        assert_eq!(w.self_linking(), -3);
    }
}
