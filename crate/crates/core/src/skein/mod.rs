//! The tri-graded skein cochain complex of an annular diagram.
//!
//! Generators are enhanced states `(α, y)`: a cube vertex together with a
//! label on every circle, `v±` on nontrivial circles and `w±` on trivial ones.

mod complex;
mod cube;
pub mod rules;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::diagram::{ResolutionDiagram, State};
use crate::error::{Error, Result};

pub use complex::{
    build_complex, build_skein_complex, homology_table, skein_homology, Bucket, GradedComplex, GradingKey,
    HomologyTable,
};
pub use cube::{Differential, StateCube};
pub use rules::Theory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    VPlus,
    VMinus,
    WPlus,
    WMinus,
}

impl Label {
    pub fn new(trivial: bool, plus: bool) -> Label {
        match (trivial, plus) {
            (false, true) => Label::VPlus,
            (false, false) => Label::VMinus,
            (true, true) => Label::WPlus,
            (true, false) => Label::WMinus,
        }
    }

    pub fn is_plus(self) -> bool {
        matches!(self, Label::VPlus | Label::WPlus)
    }

    pub fn is_trivial(self) -> bool {
        matches!(self, Label::WPlus | Label::WMinus)
    }

    /// Khovanov label `x±` obtained by forgetting triviality.
    pub fn khovanov(self) -> &'static str {
        if self.is_plus() {
            "x+"
        } else {
            "x-"
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Label::VPlus => "v+",
            Label::VMinus => "v-",
            Label::WPlus => "w+",
            Label::WMinus => "w-",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        Some(match s {
            "v+" => Label::VPlus,
            "v-" => Label::VMinus,
            "w+" => Label::WPlus,
            "w-" => Label::WMinus,
            _ => return None,
        })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// `(h, q, f)`: homological, quantum and homotopical grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GradingTriple {
    pub h: i64,
    pub q: i64,
    pub f: i64,
}

impl fmt::Display for GradingTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.h, self.q, self.f)
    }
}

/// A generator `(α, y)` with labels indexed by canonical circle id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EnhancedState {
    pub state: State,
    pub labels: Vec<Label>,
}

impl EnhancedState {
    pub fn new(state: State, labels: Vec<Label>) -> Self {
        EnhancedState { state, labels }
    }

    /// Bitmask of plus-labelled circles.
    pub fn plus_mask(&self) -> u32 {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_plus())
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Checks that labels match the circles of `r` in number and triviality.
    pub fn check(&self, r: &ResolutionDiagram) -> Result<()> {
        if self.labels.len() != r.circles.len() {
            return Err(Error::LabelMismatch {
                circle: self.labels.len().min(r.circles.len()),
                message: format!("{} labels for {} circles", self.labels.len(), r.circles.len()),
            });
        }
        for (l, c) in self.labels.iter().zip(&r.circles) {
            if l.is_trivial() != c.trivial {
                let kind = if c.trivial { "trivial" } else { "nontrivial" };
                return Err(Error::LabelMismatch {
                    circle: c.id,
                    message: format!("{l} on a {kind} circle"),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for EnhancedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ", self.state)?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Gradings of `(r.state, labels)` in a diagram with `n_plus` positive and
/// `n_minus` negative crossings.
pub fn gradings(r: &ResolutionDiagram, labels: &[Label], n_plus: usize, n_minus: usize) -> Result<GradingTriple> {
    EnhancedState::new(r.state, labels.to_vec()).check(r)?;
    let weight = r.state.weight() as i64;
    let plus = labels.iter().filter(|l| l.is_plus()).count() as i64;
    let minus = labels.len() as i64 - plus;
    let v_plus = labels.iter().filter(|l| **l == Label::VPlus).count() as i64;
    let v_minus = labels.iter().filter(|l| **l == Label::VMinus).count() as i64;
    let (np, nm) = (n_plus as i64, n_minus as i64);
    Ok(GradingTriple {
        h: -nm + weight,
        q: np - 2 * nm + weight + plus - minus,
        f: v_plus - v_minus,
    })
}

/// Grading from bitmasks; the hot path of complex assembly.
#[inline]
pub(crate) fn gradings_masked(weight: u32, circles: u32, trivial: u32, plus: u32, np: i64, nm: i64) -> GradingTriple {
    let plus_count = plus.count_ones() as i64;
    let nontrivial = !trivial & ((1u64 << circles) - 1) as u32;
    let vp = (plus & nontrivial).count_ones() as i64;
    let vm = (!plus & nontrivial).count_ones() as i64;
    GradingTriple {
        h: -nm + weight as i64,
        q: np - 2 * nm + weight as i64 + 2 * plus_count - circles as i64,
        f: vp - vm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{resolve, BraidWord};

    #[test]
    fn unknot_generator_gradings() {
        let w = BraidWord::from_tokens(1, &[]).to_slice_word();
        let r = resolve(&w, &[]).unwrap();
        assert_eq!(gradings(&r, &[Label::VMinus], 0, 0).unwrap(), GradingTriple { h: 0, q: -1, f: -1 });
        assert_eq!(gradings(&r, &[Label::VPlus], 0, 0).unwrap(), GradingTriple { h: 0, q: 1, f: 1 });
        assert!(gradings(&r, &[Label::WPlus], 0, 0).is_err());
    }

    #[test]
    fn worked_braid_transverse_generator() {
        let w = BraidWord::from_tokens(3, &[1, -2]).to_slice_word();
        let r = resolve(&w, &[false, true]).unwrap();
        let g = gradings(&r, &[Label::VMinus; 3], 1, 1).unwrap();
        assert_eq!(g, GradingTriple { h: 0, q: -3, f: -3 });
    }

    #[test]
    fn masked_matches_labelled() {
        let w = BraidWord::from_tokens(3, &[1, -2, 1]).to_slice_word();
        let res = crate::diagram::Resolver::new(&w);
        for bits in 0..8u32 {
            let r = res.resolve(State::new(bits, 3)).unwrap();
            let n = r.circles.len() as u32;
            for plus in 0..(1u32 << n) {
                let labels: Vec<Label> = r
                    .circles
                    .iter()
                    .map(|c| Label::new(c.trivial, plus >> c.id & 1 == 1))
                    .collect();
                let a = gradings(&r, &labels, 2, 1).unwrap();
                let b = gradings_masked(bits.count_ones(), n, r.trivial_mask(), plus, 2, 1);
                assert_eq!(a, b);
            }
        }
    }
}
