use rayon::prelude::*;

use super::rules::{merge_rule, split_rule, Theory};
use super::{gradings_masked, EnhancedState, GradingTriple, Label};
use crate::algebra::ExactMatrix;
use crate::diagram::{CrossingEffect, EffectKind, ResolutionDiagram, Resolver, SliceWord, State};
use crate::error::{Error, Result};

/// All resolutions of a diagram with a global numbering of generators:
/// generator `offsets[α] + y` where bit `i` of `y` marks a plus label on
/// circle `i` of `D(α)`.
#[derive(Debug, Clone)]
pub struct StateCube {
    word: SliceWord,
    resolver: Resolver,
    resolutions: Vec<ResolutionDiagram>,
    offsets: Vec<usize>,
    n_plus: usize,
    n_minus: usize,
}

/// A differential as a list of `(source, target, coefficient)` triples over
/// global generator indices, sorted by source then target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differential {
    pub theory: Theory,
    pub entries: Vec<(usize, usize, i64)>,
}

impl Differential {
    /// As a square matrix over `n` generators, columns indexed by source.
    pub fn matrix(&self, n: usize) -> ExactMatrix {
        ExactMatrix::from_triplets(n, n, self.entries.iter().map(|&(s, t, c)| (t, s, c)))
    }
}

impl StateCube {
    pub fn new(word: &SliceWord) -> Result<Self> {
        let resolver = Resolver::new(word);
        let n = word.crossings();
        let resolutions: Vec<ResolutionDiagram> = (0..1u32 << n)
            .into_par_iter()
            .map(|bits| resolver.resolve(State::new(bits, n)))
            .collect::<Result<_>>()?;
        let mut offsets = Vec::with_capacity(resolutions.len() + 1);
        let mut total = 0usize;
        for r in &resolutions {
            offsets.push(total);
            total += 1usize << r.circles.len();
        }
        offsets.push(total);
        let signs = resolver.signs();
        let n_plus = signs.iter().filter(|s| s.value() > 0).count();
        Ok(StateCube {
            word: word.clone(),
            n_plus,
            n_minus: n - n_plus,
            resolver,
            resolutions,
            offsets,
        })
    }

    pub fn word(&self) -> &SliceWord {
        &self.word
    }

    pub fn resolver(&self) -> &Resolver {
        &self.resolver
    }

    pub fn crossings(&self) -> usize {
        self.word.crossings()
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn resolution(&self, state: State) -> &ResolutionDiagram {
        &self.resolutions[state.bits() as usize]
    }

    pub fn resolutions(&self) -> &[ResolutionDiagram] {
        &self.resolutions
    }

    /// `Σ_α 2^{|circles(α)|}`.
    pub fn generator_count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn index(&self, state: State, plus: u32) -> usize {
        self.offsets[state.bits() as usize] + plus as usize
    }

    /// `(state bits, plus mask)` of a generator.
    pub fn decode(&self, index: usize) -> (u32, u32) {
        let bits = self.offsets.partition_point(|&o| o <= index) - 1;
        (bits as u32, (index - self.offsets[bits]) as u32)
    }

    pub fn enhanced(&self, index: usize) -> EnhancedState {
        let (bits, plus) = self.decode(index);
        let r = &self.resolutions[bits as usize];
        let labels = r
            .circles
            .iter()
            .map(|c| Label::new(c.trivial, plus >> c.id & 1 == 1))
            .collect();
        EnhancedState::new(r.state, labels)
    }

    pub fn index_of(&self, g: &EnhancedState) -> Result<usize> {
        if g.state.len() != self.crossings() {
            return Err(Error::StateLength {
                expected: self.crossings(),
                found: g.state.len(),
            });
        }
        g.check(self.resolution(g.state))?;
        Ok(self.index(g.state, g.plus_mask()))
    }

    pub fn grading(&self, index: usize) -> GradingTriple {
        let (bits, plus) = self.decode(index);
        let r = &self.resolutions[bits as usize];
        gradings_masked(
            bits.count_ones(),
            r.circles.len() as u32,
            r.trivial_mask(),
            plus,
            self.n_plus as i64,
            self.n_minus as i64,
        )
    }

    /// Effect of raising crossing `c` at `state` (which must have bit `c` clear).
    pub fn effect(&self, state: State, c: usize) -> CrossingEffect {
        debug_assert!(!state.get(c));
        let src = self.resolution(state);
        let dst = self.resolution(state.with(c, true));
        CrossingEffect::between(src, dst, c)
    }

    /// Plus masks of the images of `plus` along `effect`.
    pub(crate) fn images(theory: Theory, effect: &CrossingEffect, plus: u32) -> Vec<u32> {
        let mut base = 0u32;
        for (old, new) in effect.carried.iter().enumerate() {
            if let Some(new) = new {
                if plus >> old & 1 == 1 {
                    base |= 1 << new;
                }
            }
        }
        let bit = |i: usize| plus >> i & 1 == 1;
        match effect.kind {
            EffectKind::Merge { inputs: [a, b], output } => {
                match merge_rule(theory, effect.case, bit(a), bit(b), effect.trivial_in[0]) {
                    Some(true) => vec![base | 1 << output],
                    Some(false) => vec![base],
                    None => Vec::new(),
                }
            }
            EffectKind::Split { input, outputs: [j, k] } => {
                split_rule(theory, effect.case, bit(input), effect.trivial_out[0])
                    .iter()
                    .map(|&(sj, sk)| base | (sj as u32) << j | (sk as u32) << k)
                    .collect()
            }
        }
    }

    /// Assembles the full differential of the given theory.
    pub fn differential(&self, theory: Theory) -> Differential {
        let n = self.crossings();
        let per_state: Vec<Vec<(usize, usize, i64)>> = (0..1u32 << n)
            .into_par_iter()
            .map(|bits| {
                let state = State::new(bits, n);
                let src = self.resolution(state);
                let mut out = Vec::new();
                let count = 1u32 << src.circles.len();
                for c in (0..n).filter(|&c| !state.get(c)) {
                    let effect = self.effect(state, c);
                    let sign = state.sign_before(c);
                    let target_state = state.with(c, true);
                    for plus in 0..count {
                        let from = self.index(state, plus);
                        for t in Self::images(theory, &effect, plus) {
                            out.push((from, self.index(target_state, t), sign));
                        }
                    }
                }
                out.sort_unstable();
                out
            })
            .collect();
        Differential {
            theory,
            entries: per_state.into_iter().flatten().collect(),
        }
    }

    /// Coefficient of `to` in the differential of `from`.
    pub fn entry(&self, theory: Theory, from: &EnhancedState, to: &EnhancedState) -> Result<i64> {
        let i = self.index_of(from)?;
        let j = self.index_of(to)?;
        let (a, b) = (from.state.bits(), to.state.bits());
        if a & b != a || (b & !a).count_ones() != 1 {
            return Err(Error::BitDistance((a ^ b).count_ones() as usize));
        }
        let c = (b & !a).trailing_zeros() as usize;
        let effect = self.effect(from.state, c);
        let (_, plus) = self.decode(i);
        let (_, target) = self.decode(j);
        let hits = Self::images(theory, &effect, plus)
            .into_iter()
            .filter(|t| *t == target)
            .count() as i64;
        Ok(hits * from.state.sign_before(c))
    }

    /// Coefficient of `to` in `∂_Sk from`.
    pub fn skein_differential_entry(&self, from: &EnhancedState, to: &EnhancedState) -> Result<i64> {
        self.entry(Theory::Skein, from, to)
    }

    /// Coefficient of `to` in `∂_Kh from`.
    pub fn khovanov_differential_entry(&self, from: &EnhancedState, to: &EnhancedState) -> Result<i64> {
        self.entry(Theory::Khovanov, from, to)
    }
}

