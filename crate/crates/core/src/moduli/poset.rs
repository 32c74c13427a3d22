use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::config::{port, AbstractConfig, CircleSet};
use crate::diagram::resolve::{NW, SE, SW};
use crate::diagram::{CrossingEffect, EffectKind, Smoothing, SurgeryCase};
use crate::error::{Error, Result};
use crate::skein::{Label, Theory};
use crate::skein::StateCube;

/// Every partial surgery of a configuration, indexed by the mask of arc
/// positions already surgered.
#[derive(Debug, Clone)]
pub struct SurgeryCube {
    configs: Vec<AbstractConfig>,
    circles: Vec<CircleSet>,
    first_port: Vec<Vec<u32>>,
}

/// The two strand ports of `node` under smoothing `s`.
pub(crate) fn strand_ports(node: usize, s: Smoothing) -> [u32; 2] {
    [port(node, SW), port(node, if s == Smoothing::Identity { SE } else { NW })]
}

impl SurgeryCube {
    pub fn new(config: &AbstractConfig) -> Self {
        let k = config.index();
        let configs: Vec<AbstractConfig> = (0..1u32 << k).map(|t| config.surgery_mask(t).unwrap()).collect();
        let circles: Vec<CircleSet> = configs.iter().map(|c| c.circles()).collect();
        let first_port = circles
            .iter()
            .map(|z| {
                let mut first = vec![u32::MAX; z.len()];
                for (p, &c) in z.port_circle.iter().enumerate().rev() {
                    first[c] = p as u32;
                }
                first
            })
            .collect();
        SurgeryCube {
            configs,
            circles,
            first_port,
        }
    }

    pub fn index(&self) -> usize {
        self.configs[0].index()
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.index()) - 1
    }

    pub fn base(&self) -> &AbstractConfig {
        &self.configs[0]
    }

    /// Configuration after surgery on the arcs in `t` (positions in the base).
    pub fn config(&self, t: u32) -> &AbstractConfig {
        &self.configs[t as usize]
    }

    pub fn circles(&self, t: u32) -> &CircleSet {
        &self.circles[t as usize]
    }

    /// Node carrying the base arc at position `i`.
    pub fn node(&self, i: usize) -> usize {
        self.configs[0].arcs()[i]
    }

    /// Effect of surgery on arc `i` at `t`, in the circle numbering of both ends.
    pub fn step(&self, t: u32, i: usize) -> CrossingEffect {
        debug_assert_eq!(t >> i & 1, 0);
        let u = t | 1 << i;
        let node = self.node(i);
        let (src, dst) = (&self.circles[t as usize], &self.circles[u as usize]);
        let before = strand_ports(node, self.configs[t as usize].smoothing(node));
        let after = strand_ports(node, self.configs[u as usize].smoothing(node));
        let [a, b] = before.map(|p| src.port_circle[p as usize]);
        let [x, y] = after.map(|p| dst.port_circle[p as usize]);
        let (kind, case, trivial_in, trivial_out) = if a != b {
            let inputs = [a.min(b), a.max(b)];
            let tin = inputs.map(|c| src.trivial[c]);
            let case = SurgeryCase::merge(tin[0], tin[1], dst.trivial[x]);
            (EffectKind::Merge { inputs, output: x }, case, tin, [dst.trivial[x]; 2])
        } else {
            let outputs = [x.min(y), x.max(y)];
            let tout = outputs.map(|c| dst.trivial[c]);
            let case = SurgeryCase::split(src.trivial[a], tout[0], tout[1]);
            (EffectKind::Split { input: a, outputs }, case, [src.trivial[a]; 2], tout)
        };
        let carried = (0..src.len())
            .map(|c| (c != a && c != b).then(|| dst.port_circle[self.first_port[t as usize][c] as usize]))
            .collect();
        CrossingEffect {
            crossing: i,
            kind,
            case,
            trivial_in,
            trivial_out,
            carried,
        }
    }

    /// Labels reachable from plus mask `z` at `t` by surgery on arc `i`.
    pub fn successors(&self, t: u32, z: u32, i: usize) -> Vec<u32> {
        StateCube::images(Theory::Skein, &self.step(t, i), z)
    }

    /// Renders a plus mask at `t` as circle labels, e.g. `w+v-`.
    pub fn labels(&self, t: u32, z: u32) -> String {
        let c = &self.circles[t as usize];
        (0..c.len()).map(|i| Label::new(c.trivial[i], z >> i & 1 == 1).to_string()).collect()
    }
}

/// A configuration together with labels `y` on its circles and `x` on the
/// circles of its full surgery, both as plus masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DecoratedConfig {
    pub config: AbstractConfig,
    pub y: u32,
    pub x: u32,
}

/// A maximal chain: arcs in surgery order and the labels after each step
/// (`labels[0] = y`, `labels[k] = x`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Chain {
    pub order: Vec<usize>,
    pub labels: Vec<u32>,
}

impl Chain {
    /// Surgery mask after `steps` steps.
    pub fn mask(&self, steps: usize) -> u32 {
        self.order[..steps].iter().fold(0, |m, &i| m | 1 << i)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order: Vec<String> = self.order.iter().map(|i| format!("R{}", i + 1)).collect();
        write!(f, "{} {:?}", order.join(""), self.labels)
    }
}

/// The labelled configurations between `(D, y)` and `(s(D), x)`, with the
/// maximal chains through them.
#[derive(Debug, Clone, Serialize)]
pub struct Poset {
    pub elements: BTreeSet<(u32, u32)>,
    pub chains: Vec<Chain>,
}

fn extend(cube: &SurgeryCube, x: u32, chain: &mut Chain, out: &mut Vec<Chain>) {
    let t = chain.mask(chain.order.len());
    let z = *chain.labels.last().unwrap();
    if t == cube.full() {
        if z == x {
            out.push(chain.clone());
        }
        return;
    }
    for i in (0..cube.index()).filter(|i| t >> i & 1 == 0) {
        for next in cube.successors(t, z, i) {
            chain.order.push(i);
            chain.labels.push(next);
            extend(cube, x, chain, out);
            chain.order.pop();
            chain.labels.pop();
        }
    }
}

/// Maximal chains from `(D, y)` to `(s(D), x)`, sorted.
pub fn chains(cube: &SurgeryCube, y: u32, x: u32) -> Vec<Chain> {
    let mut out = Vec::new();
    let mut chain = Chain {
        order: Vec::new(),
        labels: vec![y],
    };
    extend(cube, x, &mut chain, &mut out);
    out.sort();
    out
}

/// Builds `P(D, x, y)`; fails when `(D, y)` does not precede `(s(D), x)`.
pub fn build_poset(cube: &SurgeryCube, y: u32, x: u32) -> Result<Poset> {
    let chains = chains(cube, y, x);
    if chains.is_empty() {
        return Err(Error::Decoration(format!(
            "{} does not precede {}",
            cube.labels(0, y),
            cube.labels(cube.full(), x)
        )));
    }
    let elements = chains
        .iter()
        .flat_map(|c| (0..=c.order.len()).map(move |s| (c.mask(s), c.labels[s])))
        .collect();
    Ok(Poset { elements, chains })
}

/// All decorations `(y, x)` of a configuration, as plus masks.
pub fn decorations(cube: &SurgeryCube) -> Vec<(u32, u32)> {
    let ys = 1u32 << cube.circles(0).len();
    let mut out = Vec::new();
    for y in 0..ys {
        let mut layer: BTreeSet<(u32, u32)> = BTreeSet::from([(0, y)]);
        for _ in 0..cube.index() {
            let mut next = BTreeSet::new();
            for &(t, z) in &layer {
                for i in (0..cube.index()).filter(|i| t >> i & 1 == 0) {
                    for w in cube.successors(t, z, i) {
                        next.insert((t | 1 << i, w));
                    }
                }
            }
            layer = next;
        }
        out.extend(layer.into_iter().map(|(_, x)| (y, x)));
    }
    out
}

/// Image of a chain of `D` under the identification of `P(D, x, y)` with the
/// reverse of `P(D*, y*, x*)`: arcs reversed and renumbered, labels
/// complemented.
pub fn dual_chain(chain: &Chain, circles_at: impl Fn(u32) -> usize) -> Chain {
    let k = chain.order.len();
    let order = chain.order.iter().rev().map(|&i| k - 1 - i).collect();
    let labels = (0..=k)
        .rev()
        .map(|s| {
            let n = circles_at(chain.mask(s));
            !chain.labels[s] & ((1u32 << n) - 1)
        })
        .collect();
    Chain { order, labels }
}

/// Whether chain reversal maps `P(D, x, y)` onto `P(D*, y*, x*)`.
pub fn poset_reversal(dc: &DecoratedConfig) -> bool {
    let cube = SurgeryCube::new(&dc.config);
    let dual = SurgeryCube::new(&dc.config.dual());
    let mask = |n: usize| (1u32 << n) - 1;
    let ystar = !dc.x & mask(cube.circles(cube.full()).len());
    let xstar = !dc.y & mask(cube.circles(0).len());
    let ours = chains(&cube, dc.y, dc.x);
    let theirs: BTreeSet<Chain> = chains(&dual, ystar, xstar).into_iter().collect();
    ours.len() == theirs.len() && ours.iter().all(|c| theirs.contains(&dual_chain(c, |t| cube.circles(t).len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_loops() -> AbstractConfig {
        AbstractConfig::new(
            vec![Smoothing::Identity],
            vec![0],
            vec![(port(0, NW), 0), (port(0, 3), 1), (port(0, SW), 0), (port(0, SE), -1)],
        )
        .unwrap()
    }

    #[test]
    fn mixed_merge_has_the_skein_decorations() {
        let cube = SurgeryCube::new(&two_loops());
        // circle 0 trivial, circle 1 nontrivial; merge into one nontrivial circle
        assert_eq!(cube.step(0, 0).case, SurgeryCase::MergeMixed);
        let decs = decorations(&cube);
        assert_eq!(decs, vec![(1, 0), (3, 1)]);
        for (y, x) in decs {
            assert_eq!(build_poset(&cube, y, x).unwrap().chains.len(), 1);
        }
        assert!(build_poset(&cube, 0, 0).is_err());
    }
}
