use std::collections::VecDeque;

use itertools::Itertools;
use serde::Serialize;

use crate::diagram::resolve::{NW, SE, SW};
use crate::diagram::Smoothing;
use crate::error::{Error, Result};

const NE: u8 = 3;

/// A resolution configuration in the annulus, stored as a port graph.
///
/// Every node is a small disk around a former crossing with four ports
/// `SW, SE, NW, NE` and a smoothing joining them in pairs. Outside the disks,
/// strands join ports in pairs; each strand records its signed number of
/// passes through the seam, read from the port it starts at. A node carrying
/// an arc has the arc drawn across its smoothing, so surgery on the arc flips
/// the smoothing. Circles are the closed loops of the resulting 1-manifold; a
/// circle is trivial exactly when its total winding vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbstractConfig {
    smoothing: Vec<Smoothing>,
    arcs: Vec<usize>,
    link: Vec<(u32, i32)>,
}

/// The circles of a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleSet {
    /// Circle through every port, numbered by smallest port.
    pub port_circle: Vec<usize>,
    pub trivial: Vec<bool>,
}

impl CircleSet {
    pub fn len(&self) -> usize {
        self.trivial.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trivial.is_empty()
    }

    pub fn trivial_mask(&self) -> u32 {
        self.trivial.iter().enumerate().filter(|(_, t)| **t).fold(0, |m, (i, _)| m | 1 << i)
    }
}

pub(crate) fn port(node: usize, p: u8) -> u32 {
    (4 * node) as u32 + p as u32
}

pub(crate) fn node_of(port: u32) -> usize {
    (port / 4) as usize
}

/// Ports to leave a node by when turning right off its arc, one per strand.
pub(crate) fn right_ports(s: Smoothing) -> [u8; 2] {
    match s {
        Smoothing::Identity => [NW, SE],
        Smoothing::CupCap => [NE, SW],
    }
}

/// Relabelling of ports by a quarter turn counterclockwise.
const QUARTER: [u8; 4] = [SE, NE, SW, NW];

impl AbstractConfig {
    /// Checks that `link` is a fixed-point-free involution on `4·nodes` ports
    /// with antisymmetric windings, that arcs name distinct nodes, and that
    /// every circle winds at most once around the annulus.
    pub fn new(smoothing: Vec<Smoothing>, arcs: Vec<usize>, link: Vec<(u32, i32)>) -> Result<Self> {
        let n = smoothing.len();
        if link.len() != 4 * n {
            return Err(Error::Moduli(format!("{} port links for {n} nodes", link.len())));
        }
        for (p, &(q, w)) in link.iter().enumerate() {
            let q = q as usize;
            if q >= link.len() || q == p || link[q].0 as usize != p || link[q].1 != -w {
                return Err(Error::Moduli(format!("port {p} is not linked symmetrically")));
            }
        }
        if !arcs.iter().all(|&a| a < n) || !arcs.iter().all_unique() {
            return Err(Error::ArcSubset(format!("arcs {arcs:?} on {n} nodes")));
        }
        let c = AbstractConfig { smoothing, arcs, link };
        c.trace()?;
        Ok(c)
    }

    pub fn nodes(&self) -> usize {
        self.smoothing.len()
    }

    pub fn index(&self) -> usize {
        self.arcs.len()
    }

    /// Nodes carrying arcs, in arc order.
    pub fn arcs(&self) -> &[usize] {
        &self.arcs
    }

    pub fn smoothing(&self, node: usize) -> Smoothing {
        self.smoothing[node]
    }

    /// Far end and winding of the strand leaving `port`.
    pub fn link(&self, p: u32) -> (u32, i32) {
        self.link[p as usize]
    }

    pub(crate) fn inner(&self, p: u32) -> u32 {
        let n = node_of(p);
        port(n, self.smoothing[n].partner((p % 4) as u8))
    }

    fn trace(&self) -> Result<CircleSet> {
        let mut port_circle = vec![usize::MAX; self.link.len()];
        let mut windings = Vec::new();
        for start in 0..self.link.len() as u32 {
            if port_circle[start as usize] != usize::MAX {
                continue;
            }
            let id = windings.len();
            let mut cur = start;
            let mut w = 0;
            loop {
                let (q, dw) = self.link[cur as usize];
                port_circle[cur as usize] = id;
                port_circle[q as usize] = id;
                w += dw;
                cur = self.inner(q);
                if cur == start {
                    break;
                }
            }
            if w.abs() > 1 {
                return Err(Error::Moduli(format!("circle {id} winds {w} times")));
            }
            windings.push(w);
        }
        Ok(CircleSet {
            port_circle,
            trivial: windings.iter().map(|w| *w == 0).collect(),
        })
    }

    /// Circles, numbered by their smallest port.
    pub fn circles(&self) -> CircleSet {
        self.trace().expect("validated on construction")
    }

    /// Circles on the two strands of the arc at `pos`.
    pub fn arc_endpoints(&self, pos: usize, circles: &CircleSet) -> [usize; 2] {
        let n = self.arcs[pos];
        let s = self.smoothing[n];
        let a = port(n, SW);
        let b = port(n, if s == Smoothing::Identity { SE } else { NW });
        [circles.port_circle[a as usize], circles.port_circle[b as usize]]
    }

    /// An arc joining two different circles.
    pub fn is_m_arc(&self, pos: usize) -> bool {
        let [a, b] = self.arc_endpoints(pos, &self.circles());
        a != b
    }

    fn check_mask(&self, mask: u32) -> Result<()> {
        if self.index() < 32 && mask >> self.index() != 0 {
            return Err(Error::ArcSubset(format!("mask {mask:#b} on {} arcs", self.index())));
        }
        Ok(())
    }

    /// Surgery along the arcs whose positions are set in `mask`; remaining
    /// arcs keep their relative order.
    pub fn surgery_mask(&self, mask: u32) -> Result<AbstractConfig> {
        self.check_mask(mask)?;
        let mut out = self.clone();
        let mut arcs = Vec::new();
        for (i, &n) in self.arcs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out.smoothing[n] = out.smoothing[n].flip();
            } else {
                arcs.push(n);
            }
        }
        out.arcs = arcs;
        Ok(out)
    }

    /// Surgery along the arcs at the given positions.
    pub fn surgery(&self, positions: &[usize]) -> Result<AbstractConfig> {
        if let Some(&p) = positions.iter().find(|&&p| p >= self.index()) {
            return Err(Error::ArcSubset(format!("arc {p} of {}", self.index())));
        }
        self.surgery_mask(positions.iter().fold(0, |m, &p| m | 1 << p))
    }

    /// `s(D)`: surgery along every arc.
    pub fn full_surgery(&self) -> AbstractConfig {
        self.surgery_mask((1u32 << self.index()) - 1).unwrap()
    }

    /// The dual: circles of `s(D)`, arc `i` replaced by its dual in position
    /// `k − 1 − i`.
    pub fn dual(&self) -> AbstractConfig {
        let mut out = self.clone();
        for &n in &self.arcs {
            out.smoothing[n] = out.smoothing[n].flip();
        }
        out.arcs.reverse();
        out
    }

    /// The sub-configuration on the arcs at positions in `mask`: other nodes
    /// are absorbed into the strands, circles missing every kept arc dropped.
    pub fn restrict(&self, mask: u32) -> Result<AbstractConfig> {
        self.check_mask(mask)?;
        let keep: Vec<usize> = (0..self.index()).filter(|i| mask >> i & 1 == 1).map(|i| self.arcs[i]).collect();
        let mut new_id = vec![usize::MAX; self.nodes()];
        for (i, &n) in keep.iter().enumerate() {
            new_id[n] = i;
        }
        let mut link = Vec::with_capacity(4 * keep.len());
        for &n in &keep {
            for p in 0..4u8 {
                let (mut q, mut w) = self.link[port(n, p) as usize];
                while new_id[node_of(q)] == usize::MAX {
                    let (q2, w2) = self.link[self.inner(q) as usize];
                    q = q2;
                    w += w2;
                }
                link.push((port(new_id[node_of(q)], (q % 4) as u8), w));
            }
        }
        AbstractConfig::new(
            keep.iter().map(|&n| self.smoothing[n]).collect(),
            (0..keep.len()).collect(),
            link,
        )
    }

    /// Number of arc endpoints on each circle.
    pub fn endpoint_counts(&self, circles: &CircleSet) -> Vec<usize> {
        let mut count = vec![0; circles.len()];
        for pos in 0..self.index() {
            for c in self.arc_endpoints(pos, circles) {
                count[c] += 1;
            }
        }
        count
    }

    /// Every circle meets an arc.
    pub fn is_basic(&self) -> bool {
        self.endpoint_counts(&self.circles()).iter().all(|&c| c > 0)
    }

    /// Circles meeting exactly one arc endpoint.
    pub fn leaves(&self) -> Vec<usize> {
        let counts = self.endpoint_counts(&self.circles());
        (0..counts.len()).filter(|&i| counts[i] == 1).collect()
    }

    pub fn has_leaf(&self) -> bool {
        !self.leaves().is_empty()
    }

    pub fn has_coleaf(&self) -> bool {
        self.dual().has_leaf()
    }

    /// Integer encoding with windings gauge-fixed along a spanning forest of
    /// the node graph (moving a node once around the annulus shifts the
    /// windings of its strands without changing any circle).
    pub fn encoding(&self) -> Vec<i32> {
        let n = self.nodes();
        let mut potential = vec![None::<i32>; n];
        for root in 0..n {
            if potential[root].is_some() {
                continue;
            }
            potential[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let pu = potential[u].unwrap();
                for p in 0..4 {
                    let (q, w) = self.link[port(u, p) as usize];
                    let v = node_of(q);
                    if potential[v].is_none() {
                        potential[v] = Some(pu + w);
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(2 + 2 * n + self.arcs.len() + 8 * n);
        out.push(n as i32);
        out.extend(self.smoothing.iter().map(|s| *s as i32));
        out.push(self.arcs.len() as i32);
        out.extend(self.arcs.iter().map(|&a| a as i32));
        for (p, &(q, w)) in self.link.iter().enumerate() {
            let (u, v) = (node_of(p as u32), node_of(q));
            out.push(q as i32);
            out.push(w + potential[u].unwrap() - potential[v].unwrap());
        }
        out
    }

    /// Relabels nodes so that node `order[i]` becomes node `i`, and rotates
    /// node `i` (new numbering) by `turns[i]` quarter turns.
    pub fn relabel(&self, order: &[usize], turns: &[u8]) -> AbstractConfig {
        let n = self.nodes();
        let mut new_id = vec![0; n];
        for (i, &o) in order.iter().enumerate() {
            new_id[o] = i;
        }
        let rotate = |p: u8, t: u8| (0..t).fold(p, |p, _| QUARTER[p as usize]);
        let map = |q: u32| {
            let v = new_id[node_of(q)];
            port(v, rotate((q % 4) as u8, turns[v]))
        };
        let mut link = vec![(0, 0); 4 * n];
        for (p, &(q, w)) in self.link.iter().enumerate() {
            link[map(p as u32) as usize] = (map(q), w);
        }
        let smoothing = (0..n)
            .map(|i| {
                let s = self.smoothing[order[i]];
                if turns[i] % 2 == 1 {
                    s.flip()
                } else {
                    s
                }
            })
            .collect();
        let arcs = self.arcs.iter().map(|&a| new_id[a]).collect();
        AbstractConfig { smoothing, arcs, link }
    }

    /// Mirror image: `radial` swaps the two boundary circles of the annulus
    /// (left and right ports), `angular` reverses the core direction (top and
    /// bottom ports, windings negated).
    pub fn reflect(&self, radial: bool, angular: bool) -> AbstractConfig {
        let mask = (radial as u32) | (angular as u32) << 1;
        let sign = if angular { -1 } else { 1 };
        let map = |p: u32| p ^ mask;
        let mut link = vec![(0, 0); self.link.len()];
        for (p, &(q, w)) in self.link.iter().enumerate() {
            link[map(p as u32) as usize] = (map(q), sign * w);
        }
        AbstractConfig {
            smoothing: self.smoothing.clone(),
            arcs: self.arcs.clone(),
            link,
        }
    }

    /// Form invariant under isotopy of the annulus, its half-turn exchanging
    /// the boundary circles, and reordering the arcs: the least encoding over
    /// arc orders and node rotations that turn every smoothing vertical.
    /// Only defined for configurations where every node carries an arc.
    pub fn canonical_form(&self) -> Vec<i32> {
        self.isotopy_form().min(self.reflect(true, true).isotopy_form())
    }

    fn isotopy_form(&self) -> Vec<i32> {
        let n = self.nodes();
        debug_assert_eq!(n, self.index());
        let base: Vec<u8> = self.smoothing.iter().map(|s| (*s == Smoothing::CupCap) as u8).collect();
        let mut best: Option<Vec<i32>> = None;
        for perm in self.arcs.iter().copied().permutations(n) {
            for flips in 0..1u32 << n {
                let turns: Vec<u8> = (0..n).map(|i| base[perm[i]] + 2 * (flips >> i & 1) as u8).collect();
                let mut c = self.relabel(&perm, &turns);
                c.arcs = (0..n).collect();
                let e = c.encoding();
                if best.as_ref().is_none_or(|b| e < *b) {
                    best = Some(e);
                }
            }
        }
        best.unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One node with identity smoothing; SW joined to NW and SE to NE outside,
    /// the right-hand loop winding once.
    fn two_loops() -> AbstractConfig {
        AbstractConfig::new(
            vec![Smoothing::Identity],
            vec![0],
            vec![(port(0, NW), 0), (port(0, NE), 1), (port(0, SW), 0), (port(0, SE), -1)],
        )
        .unwrap()
    }

    #[test]
    fn circles_and_surgery() {
        let c = two_loops();
        let z = c.circles();
        assert_eq!(z.len(), 2);
        assert_eq!(z.trivial, vec![true, false]);
        assert!(c.is_m_arc(0));
        let s = c.full_surgery();
        let zs = s.circles();
        assert_eq!(zs.len(), 1);
        assert_eq!(zs.trivial, vec![false]);
        assert_eq!(c.surgery_mask(0).unwrap(), c);
    }

    #[test]
    fn dual_is_an_involution() {
        let c = two_loops();
        assert_eq!(c.dual().dual(), c);
        assert_eq!(c.dual().circles(), c.full_surgery().circles());
    }

    #[test]
    fn rejects_asymmetric_links() {
        let bad = AbstractConfig::new(vec![Smoothing::Identity], vec![0], vec![(2, 0), (3, 0), (1, 0), (0, 0)]);
        assert!(bad.is_err());
    }

    #[test]
    fn quarter_turn_swaps_smoothing_and_keeps_circles() {
        let c = two_loops();
        let r = c.relabel(&[0], &[1]);
        assert_eq!(r.smoothing(0), Smoothing::CupCap);
        let (a, b) = (c.circles(), r.circles());
        assert_eq!(a.trivial.iter().filter(|t| **t).count(), b.trivial.iter().filter(|t| **t).count());
        assert_eq!(c.canonical_form(), r.canonical_form());
    }
}
