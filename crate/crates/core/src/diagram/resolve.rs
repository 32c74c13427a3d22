use serde::Serialize;

use super::{Sign, Slice, SliceWord, State};
use crate::error::{Error, Result};

pub(crate) const NONE: u32 = u32::MAX;

/// Port names of a crossing, indexed 0..4.
pub(crate) const SW: u8 = 0;
pub(crate) const SE: u8 = 1;
pub(crate) const NW: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Smoothing {
    /// SW–NW and SE–NE: the strands continue vertically.
    Identity,
    /// SW–SE and NW–NE: a cap below, a cup above.
    CupCap,
}

impl Smoothing {
    pub fn flip(self) -> Smoothing {
        match self {
            Smoothing::Identity => Smoothing::CupCap,
            Smoothing::CupCap => Smoothing::Identity,
        }
    }

    /// Port joined to `port` inside the crossing.
    pub fn partner(self, port: u8) -> u8 {
        match self {
            Smoothing::Identity => port ^ 2,
            Smoothing::CupCap => port ^ 1,
        }
    }
}

/// Port joined to `port` when the crossing is left unsmoothed.
fn strand_partner(port: u8) -> u8 {
    port ^ 3
}

/// Smoothing of a crossing of geometric type `ty` at bit value `bit`.
pub(crate) fn smoothing_of(ty: Sign, bit: bool) -> Smoothing {
    match (ty, bit) {
        (Sign::Positive, false) | (Sign::Negative, true) => Smoothing::Identity,
        _ => Smoothing::CupCap,
    }
}

/// Strand-end graph of a diagram. Edge `e` has bottom end `2e` and top end
/// `2e+1`; edges are numbered level by level, left to right, so edges
/// `0..seam_count` are the ones crossing the seam.
#[derive(Debug, Clone)]
pub(crate) struct Topology {
    pub seam: usize,
    pub n_edges: usize,
    /// Fixed junction partner of each end, or `NONE` at crossing ports.
    pub partner: Vec<u32>,
    /// `crossing * 4 + port` for crossing ports, `NONE` elsewhere.
    pub port_of: Vec<u32>,
    /// Ends at the four ports of each crossing, in sign-assignment order.
    pub ports: Vec<[u32; 4]>,
    pub types: Vec<Sign>,
    pub signs: Vec<Sign>,
    pub upward: Vec<bool>,
    pub component_count: usize,
}

impl Topology {
    pub fn new(word: &SliceWord) -> Topology {
        let k = word.seam_count();
        let slices = word.slices();
        let levels = slices.len();
        let mut counts = vec![k];
        for s in slices {
            let c = *counts.last().unwrap();
            counts.push(match s {
                Slice::Cross { .. } => c,
                Slice::Cup { .. } => c + 2,
                Slice::Cap { .. } => c - 2,
            });
        }
        let level_count = levels.max(1);
        let mut offset = Vec::with_capacity(level_count);
        let mut n_edges = 0usize;
        for &c in counts.iter().take(level_count) {
            offset.push(n_edges);
            n_edges += c;
        }
        let edge = |t: usize, p: usize| -> u32 { (offset[t % level_count] + p) as u32 };
        let bottom = |t: usize, p: usize| -> u32 { 2 * edge(t, p) };
        let top = |t: usize, p: usize| -> u32 { 2 * edge(t, p) + 1 };

        let mut partner = vec![NONE; 2 * n_edges];
        let mut join = |a: u32, b: u32| {
            partner[a as usize] = b;
            partner[b as usize] = a;
        };
        let n = word.crossings();
        let mut slice_to_crossing = vec![usize::MAX; levels];
        for c in 0..n {
            slice_to_crossing[word.crossing_slice(c)] = c;
        }
        let mut ports = vec![[NONE; 4]; n];
        let mut types = vec![Sign::Positive; n];
        if levels == 0 {
            for p in 0..k {
                join(top(0, p), bottom(0, p));
            }
        }
        for (t, s) in slices.iter().enumerate() {
            let below = counts[t];
            let up = t + 1;
            match *s {
                Slice::Cross { position, sign } => {
                    let i = position - 1;
                    for p in (0..below).filter(|&p| p != i && p != i + 1) {
                        join(top(t, p), bottom(up, p));
                    }
                    let c = slice_to_crossing[t];
                    ports[c] = [top(t, i), top(t, i + 1), bottom(up, i), bottom(up, i + 1)];
                    types[c] = sign;
                }
                Slice::Cup { position } => {
                    let i = position - 1;
                    for p in 0..below {
                        let q = if p < i { p } else { p + 2 };
                        join(top(t, p), bottom(up, q));
                    }
                    join(bottom(up, i), bottom(up, i + 1));
                }
                Slice::Cap { position } => {
                    let i = position - 1;
                    for p in 0..below {
                        if p < i {
                            join(top(t, p), bottom(up, p));
                        } else if p > i + 1 {
                            join(top(t, p), bottom(up, p - 2));
                        }
                    }
                    join(top(t, i), top(t, i + 1));
                }
            }
        }
        let mut port_of = vec![NONE; 2 * n_edges];
        for (c, ps) in ports.iter().enumerate() {
            for (j, &e) in ps.iter().enumerate() {
                port_of[e as usize] = (4 * c + j) as u32;
            }
        }
        let mut topo = Topology {
            seam: k,
            n_edges,
            partner,
            port_of,
            ports,
            types,
            signs: Vec::new(),
            upward: Vec::new(),
            component_count: 0,
        };
        topo.orient(word.orientations());
        topo
    }

    fn orient(&mut self, flags: &[bool]) {
        let mut upward = vec![true; self.n_edges];
        let mut seen = vec![false; self.n_edges];
        let mut comp = 0usize;
        for e in 0..self.n_edges {
            if seen[e] {
                continue;
            }
            let keep = flags.get(comp).copied().unwrap_or(true);
            let start = 2 * e as u32;
            let mut cur = start;
            loop {
                let ed = (cur >> 1) as usize;
                seen[ed] = true;
                let going_up = cur & 1 == 0;
                upward[ed] = going_up == keep;
                let next = cur ^ 1;
                let j = self.junction(next, |c, p| {
                    let _ = c;
                    strand_partner(p)
                });
                if j == start {
                    break;
                }
                cur = j;
            }
            comp += 1;
        }
        self.component_count = comp;
        self.signs = self
            .ports
            .iter()
            .zip(&self.types)
            .map(|(ps, ty)| {
                let d = |end: u32| if upward[(end >> 1) as usize] { Sign::Positive } else { Sign::Negative };
                ty.times(d(ps[SW as usize])).times(d(ps[SE as usize]))
            })
            .collect();
        self.upward = upward;
    }

    pub fn components(&self) -> usize {
        self.component_count
    }

    pub fn all_upward(&self) -> bool {
        self.upward.iter().all(|u| *u)
    }

    pub fn crossings(&self) -> usize {
        self.ports.len()
    }

    /// Junction partner of an end, with crossing ports resolved by `inner`.
    #[inline]
    pub fn junction(&self, end: u32, inner: impl Fn(usize, u8) -> u8) -> u32 {
        let p = self.partner[end as usize];
        if p != NONE {
            return p;
        }
        let cp = self.port_of[end as usize] as usize;
        let (c, port) = (cp / 4, (cp % 4) as u8);
        self.ports[c][inner(c, port) as usize]
    }

    pub fn smoothing(&self, c: usize, state: State) -> Smoothing {
        smoothing_of(self.types[c], state.get(c))
    }

    /// Traces all circles of the smoothing given by `state`.
    pub fn trace(&self, state: State) -> ResolutionDiagram {
        let smooth: Vec<Smoothing> = (0..self.crossings()).map(|c| self.smoothing(c, state)).collect();
        let mut edge_circle = vec![u16::MAX; self.n_edges];
        struct Raw {
            winding: i32,
            min_seam: usize,
            first_edge: usize,
        }
        let mut raw: Vec<Raw> = Vec::new();
        for e in 0..self.n_edges {
            if edge_circle[e] != u16::MAX {
                continue;
            }
            let id = raw.len() as u16;
            let start = 2 * e as u32;
            let mut cur = start;
            let mut winding = 0i32;
            let mut min_seam = usize::MAX;
            loop {
                let ed = (cur >> 1) as usize;
                edge_circle[ed] = id;
                if ed < self.seam {
                    winding += if cur & 1 == 0 { 1 } else { -1 };
                    min_seam = min_seam.min(ed);
                }
                let j = self.junction(cur ^ 1, |c, p| smooth[c].partner(p));
                if j == start {
                    break;
                }
                cur = j;
            }
            assert!(
                (-1..=1).contains(&winding),
                "circle winding {winding} outside -1..=1 at state {state}"
            );
            raw.push(Raw {
                winding,
                min_seam,
                first_edge: e,
            });
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by_key(|&i| {
            let r = &raw[i];
            if r.winding != 0 {
                (0, r.min_seam)
            } else {
                (1, r.first_edge)
            }
        });
        let mut rank = vec![0u16; raw.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new as u16;
        }
        for c in edge_circle.iter_mut() {
            *c = rank[*c as usize];
        }
        let circles = order
            .iter()
            .enumerate()
            .map(|(id, &old)| Circle {
                id,
                trivial: raw[old].winding == 0,
                seam_winding: raw[old].winding,
                first_edge: raw[old].first_edge,
            })
            .collect();
        let incidence = (0..self.crossings())
            .map(|c| {
                let ps = self.ports[c];
                let a = ps[SW as usize];
                let b = match smooth[c] {
                    Smoothing::Identity => ps[SE as usize],
                    Smoothing::CupCap => ps[NW as usize],
                };
                [
                    edge_circle[(a >> 1) as usize] as usize,
                    edge_circle[(b >> 1) as usize] as usize,
                ]
            })
            .collect();
        ResolutionDiagram {
            state,
            circles,
            incidence,
            edge_circle,
        }
    }
}

/// A circle of a resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circle {
    pub id: usize,
    pub trivial: bool,
    /// Signed seam passages along the traversal that runs upward on the
    /// circle's first edge.
    pub seam_winding: i32,
    #[serde(skip)]
    pub(crate) first_edge: usize,
}

/// Circles of a fully smoothed state with their per-crossing incidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionDiagram {
    pub state: State,
    pub circles: Vec<Circle>,
    /// For each crossing, the circles through its two smoothing strands:
    /// `[left, right]` at an identity smoothing, `[bottom, top]` at a cup-cap.
    pub incidence: Vec<[usize; 2]>,
    #[serde(skip)]
    pub(crate) edge_circle: Vec<u16>,
}

impl ResolutionDiagram {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn trivial_count(&self) -> usize {
        self.circles.iter().filter(|c| c.trivial).count()
    }

    pub fn nontrivial_count(&self) -> usize {
        self.circles.len() - self.trivial_count()
    }

    /// Bitmask of trivial circles.
    pub fn trivial_mask(&self) -> u32 {
        self.circles
            .iter()
            .filter(|c| c.trivial)
            .fold(0, |m, c| m | 1 << c.id)
    }

    /// Circle through the seam strand at 1-based position `p`.
    pub fn circle_at_seam(&self, p: usize) -> usize {
        self.edge_circle[p - 1] as usize
    }

    /// Number of seam strands lying on pairwise distinct circles.
    pub fn distinct_seam_circles(&self, seam: usize) -> usize {
        let mut ids: Vec<u16> = self.edge_circle[..seam].to_vec();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }
}

/// The six surgery shapes: merges 2a–2c and splits 3a–3c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SurgeryCase {
    /// Two trivial circles merge into a trivial circle.
    MergeTrivial,
    /// A trivial and a nontrivial circle merge into a nontrivial circle.
    MergeMixed,
    /// Two nontrivial circles merge into a trivial circle.
    MergeNontrivial,
    /// A trivial circle splits into two trivial circles.
    SplitTrivial,
    /// A nontrivial circle splits into a trivial and a nontrivial circle.
    SplitMixed,
    /// A trivial circle splits into two nontrivial circles.
    SplitNontrivial,
}

impl SurgeryCase {
    pub fn code(self) -> &'static str {
        match self {
            SurgeryCase::MergeTrivial => "2a",
            SurgeryCase::MergeMixed => "2b",
            SurgeryCase::MergeNontrivial => "2c",
            SurgeryCase::SplitTrivial => "3a",
            SurgeryCase::SplitMixed => "3b",
            SurgeryCase::SplitNontrivial => "3c",
        }
    }

    pub fn is_merge(self) -> bool {
        matches!(
            self,
            SurgeryCase::MergeTrivial | SurgeryCase::MergeMixed | SurgeryCase::MergeNontrivial
        )
    }

    /// Classifies a merge from input and output triviality.
    pub fn merge(a: bool, b: bool, out: bool) -> SurgeryCase {
        match (a, b, out) {
            (true, true, true) => SurgeryCase::MergeTrivial,
            (true, false, false) | (false, true, false) => SurgeryCase::MergeMixed,
            (false, false, true) => SurgeryCase::MergeNontrivial,
            _ => panic!("impossible annular merge: trivial flags {a} {b} -> {out}"),
        }
    }

    /// Classifies a split from input and output triviality.
    pub fn split(input: bool, a: bool, b: bool) -> SurgeryCase {
        match (input, a, b) {
            (true, true, true) => SurgeryCase::SplitTrivial,
            (false, true, false) | (false, false, true) => SurgeryCase::SplitMixed,
            (true, false, false) => SurgeryCase::SplitNontrivial,
            _ => panic!("impossible annular split: trivial flags {input} -> {a} {b}"),
        }
    }
}

/// Where the circles untouched by a surgery go: `carried[old] = Some(new)`.
pub type CircleMap = Vec<Option<usize>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EffectKind {
    Merge { inputs: [usize; 2], output: usize },
    Split { input: usize, outputs: [usize; 2] },
}

/// Effect of raising one bit of a state from 0 to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingEffect {
    pub crossing: usize,
    pub kind: EffectKind,
    pub case: SurgeryCase,
    /// Triviality of the consumed circles (a split repeats its input).
    pub trivial_in: [bool; 2],
    /// Triviality of the produced circles (a merge repeats its output).
    pub trivial_out: [bool; 2],
    pub carried: CircleMap,
}

impl CrossingEffect {
    /// Effect between a resolution and the one with crossing `c` raised.
    pub(crate) fn between(src: &ResolutionDiagram, dst: &ResolutionDiagram, c: usize) -> CrossingEffect {
        let [a, b] = src.incidence[c];
        let triv = |r: &ResolutionDiagram, i: usize| r.circles[i].trivial;
        let (kind, case, trivial_in, trivial_out) = if a != b {
            let out = dst.incidence[c][0];
            debug_assert_eq!(dst.incidence[c][0], dst.incidence[c][1]);
            let inputs = [a.min(b), a.max(b)];
            let tin = [triv(src, inputs[0]), triv(src, inputs[1])];
            let case = SurgeryCase::merge(tin[0], tin[1], triv(dst, out));
            let tout = [triv(dst, out); 2];
            (EffectKind::Merge { inputs, output: out }, case, tin, tout)
        } else {
            let [x, y] = dst.incidence[c];
            debug_assert_ne!(x, y);
            let outputs = [x.min(y), x.max(y)];
            let tout = [triv(dst, outputs[0]), triv(dst, outputs[1])];
            let case = SurgeryCase::split(triv(src, a), tout[0], tout[1]);
            (EffectKind::Split { input: a, outputs }, case, [triv(src, a); 2], tout)
        };
        let carried = src
            .circles
            .iter()
            .map(|z| {
                if z.id == a || z.id == b {
                    None
                } else {
                    Some(dst.edge_circle[z.first_edge] as usize)
                }
            })
            .collect();
        CrossingEffect {
            crossing: c,
            kind,
            case,
            trivial_in,
            trivial_out,
            carried,
        }
    }
}

/// Resolves states of one diagram without re-deriving its topology.
#[derive(Debug, Clone)]
pub struct Resolver {
    pub(crate) topo: Topology,
    crossings: usize,
}

impl Resolver {
    pub fn new(word: &SliceWord) -> Self {
        Resolver {
            topo: Topology::new(word),
            crossings: word.crossings(),
        }
    }

    pub fn crossings(&self) -> usize {
        self.crossings
    }

    pub fn resolve(&self, state: State) -> Result<ResolutionDiagram> {
        if state.len() != self.crossings {
            return Err(Error::StateLength {
                expected: self.crossings,
                found: state.len(),
            });
        }
        Ok(self.topo.trace(state))
    }

    pub fn crossing_effect(&self, r: &ResolutionDiagram, c: usize) -> Result<CrossingEffect> {
        if c >= self.crossings || r.state.len() != self.crossings {
            return Err(Error::StateLength {
                expected: self.crossings,
                found: r.state.len(),
            });
        }
        if r.state.get(c) {
            return Err(Error::AlreadyResolved(c));
        }
        let dst = self.topo.trace(r.state.with(c, true));
        Ok(CrossingEffect::between(r, &dst, c))
    }

    /// Crossing signs derived from the component orientations.
    pub fn signs(&self) -> &[Sign] {
        &self.topo.signs
    }
}

/// Resolves `word` at `alpha` (one bit per crossing, in crossing order).
pub fn resolve(word: &SliceWord, alpha: &[bool]) -> Result<ResolutionDiagram> {
    if alpha.len() != word.crossings() {
        return Err(Error::StateLength {
            expected: word.crossings(),
            found: alpha.len(),
        });
    }
    Resolver::new(word).resolve(State::from_bools(alpha))
}

/// Effect of raising crossing `c` (0-based) of `r`, a resolution of `word`.
pub fn crossing_effect(word: &SliceWord, r: &ResolutionDiagram, c: usize) -> Result<CrossingEffect> {
    Resolver::new(word).crossing_effect(r, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::BraidWord;

    fn braid(b: usize, t: &[i64]) -> SliceWord {
        BraidWord::from_tokens(b, t).to_slice_word()
    }

    #[test]
    fn single_seam_strand_is_nontrivial() {
        let r = resolve(&braid(1, &[]), &[]).unwrap();
        assert_eq!(r.circles.len(), 1);
        assert!(!r.circles[0].trivial);
        assert_eq!(r.circles[0].seam_winding, 1);
    }

    // Hand trace of σ₁σ₂⁻¹: the 0-smoothing of the positive crossing is the
    // identity, the 0-smoothing of the negative crossing is the cup-cap.
    #[test]
    fn worked_braid_circle_census() {
        let w = braid(3, &[1, -2]);
        let census = |s: &str| {
            let r = resolve(&w, &State::parse(s).unwrap().to_bools()).unwrap();
            (r.nontrivial_count(), r.trivial_count())
        };
        assert_eq!(census("00"), (1, 1));
        assert_eq!(census("01"), (3, 0));
        assert_eq!(census("10"), (1, 0));
        assert_eq!(census("11"), (1, 1));
    }

    #[test]
    fn worked_braid_top_state_incidence() {
        let w = braid(3, &[1, -2]);
        let r = resolve(&w, &[true, true]).unwrap();
        // strand 3 stays a lone nontrivial circle; strands 1,2 close into a
        // trivial circle through the cup-cap at crossing 1.
        assert_eq!(r.circle_at_seam(3), 0);
        assert_eq!(r.circle_at_seam(1), 1);
        assert_eq!(r.circle_at_seam(2), 1);
        assert!(r.circles[1].trivial);
        assert_eq!(r.incidence[0], [1, 1]);
        // crossing 2 is identity-smoothed: strand 2 on the left, 3 on the right
        assert_eq!(r.incidence[1], [1, 0]);
    }

    #[test]
    fn worked_braid_first_flip_is_mixed_merge() {
        let w = braid(3, &[1, -2]);
        let res = Resolver::new(&w);
        let r = res.resolve(State::parse("00").unwrap()).unwrap();
        let e = res.crossing_effect(&r, 0).unwrap();
        assert_eq!(e.case, SurgeryCase::MergeMixed);
        assert_eq!(e.kind, EffectKind::Merge { inputs: [0, 1], output: 0 });
        let e2 = res.crossing_effect(&r, 1).unwrap();
        assert_eq!(e2.case, SurgeryCase::SplitNontrivial);
    }

    #[test]
    fn trefoil_flip_merges_nontrivial_pair() {
        let w = braid(2, &[1, 1, 1]);
        let res = Resolver::new(&w);
        let r = res.resolve(State::zero(3)).unwrap();
        assert_eq!(r.nontrivial_count(), 2);
        for c in 0..3 {
            let e = res.crossing_effect(&r, c).unwrap();
            assert_eq!(e.case, SurgeryCase::MergeNontrivial);
            assert_eq!(e.case.code(), "2c");
        }
        assert_eq!(res.crossing_effect(&r.clone(), 0).unwrap().carried, vec![None, None]);
    }

    #[test]
    fn raised_bit_is_rejected() {
        let w = braid(2, &[1]);
        let res = Resolver::new(&w);
        let r = res.resolve(State::parse("1").unwrap()).unwrap();
        assert_eq!(res.crossing_effect(&r, 0), Err(Error::AlreadyResolved(0)));
        assert!(resolve(&w, &[]).is_err());
    }

    #[test]
    fn oriented_braid_resolution_has_parallel_strands() {
        let w = braid(4, &[1, -2, 3, -1, -3]);
        let topo = Topology::new(&w);
        let mut bits = 0u32;
        for (i, s) in topo.signs.iter().enumerate() {
            if *s == Sign::Negative {
                bits |= 1 << i;
            }
        }
        let r = topo.trace(State::new(bits, 5));
        assert_eq!(r.nontrivial_count(), 4);
        assert_eq!(r.trivial_count(), 0);
    }

    #[test]
    fn reversed_component_flips_crossing_signs() {
        // Hopf link drawn with cups and caps; reversing one component flips
        // both crossing signs.
        let mut slices = vec![Slice::Cup { position: 1 }, Slice::Cup { position: 3 }];
        slices.push(Slice::Cross { position: 2, sign: Sign::Positive });
        slices.push(Slice::Cross { position: 2, sign: Sign::Positive });
        slices.push(Slice::Cap { position: 1 });
        slices.push(Slice::Cap { position: 1 });
        let a = SliceWord::new(0, slices.clone(), None).unwrap();
        let b = SliceWord::new(0, slices, Some(vec![true, false])).unwrap();
        assert_eq!(a.n_plus() + b.n_plus(), 2);
        assert_eq!(a.crossing_signs()[0], a.crossing_signs()[1]);
        assert_ne!(a.crossing_signs()[0], b.crossing_signs()[0]);
    }
}
