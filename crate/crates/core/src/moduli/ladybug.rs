use serde::Serialize;

use super::config::{node_of, port, right_ports};
use super::poset::{strand_ports, SurgeryCube};

/// The two ladybugs: the circle stays trivial under both single surgeries
/// (as on the sphere), or one surgery cuts it into two essential circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LadybugKind {
    Planar,
    Annular,
}

/// Which circles bound an interval in a ladybug face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Circles sharing an arc of the right pair are matched.
    #[default]
    Right,
    /// The other bijection.
    Opposite,
}

impl Convention {
    pub fn opposite(self) -> Convention {
        match self {
            Convention::Right => Convention::Opposite,
            Convention::Opposite => Convention::Right,
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "right" => Ok(Convention::Right),
            "opposite" => Ok(Convention::Opposite),
            _ => Err(format!("unknown convention `{s}` (expected right or opposite)")),
        }
    }
}

/// A ladybug face of a surgery cube with its matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadybugMatching {
    pub kind: LadybugKind,
    /// Arc positions `(i, j)` with `i < j`.
    pub arcs: (usize, usize),
    /// `(circle after surgery on i, circle after surgery on j)` sharing a
    /// right-pair arc.
    pub pairs: [(usize, usize); 2],
    /// The right pair seen from arc `j` is the one seen from arc `i`.
    pub right_pair_consistent: bool,
}

impl LadybugMatching {
    /// Partner under `convention` of circle `c` of `s_i`.
    pub fn partner(&self, c: usize, convention: Convention) -> Option<usize> {
        let k = self.pairs.iter().position(|p| p.0 == c)?;
        Some(match convention {
            Convention::Right => self.pairs[k].1,
            Convention::Opposite => self.pairs[1 - k].1,
        })
    }
}

/// Detects a ladybug on arcs `i < j` of the configuration at `t`: both arcs
/// on one trivial circle with alternating endpoints.
pub fn ladybug_kind(cube: &SurgeryCube, t: u32, i: usize, j: usize) -> Option<LadybugKind> {
    let e = cube.config(t);
    let z = cube.circles(t);
    let (ni, nj) = (cube.node(i), cube.node(j));
    let ports: Vec<u32> = strand_ports(ni, e.smoothing(ni))
        .into_iter()
        .chain(strand_ports(nj, e.smoothing(nj)))
        .collect();
    let c = z.port_circle[ports[0] as usize];
    if !z.trivial[c] || ports.iter().any(|&p| z.port_circle[p as usize] != c) {
        return None;
    }
    let split = |a: usize, other: usize| {
        let u = t | 1 << a;
        let n = cube.node(other);
        let zs = cube.circles(u);
        let [p, q] = strand_ports(n, cube.config(u).smoothing(n));
        (zs.port_circle[p as usize] != zs.port_circle[q as usize], zs.trivial[zs.port_circle[p as usize]])
    };
    let (alt_i, triv_i) = split(i, j);
    let (alt_j, triv_j) = split(j, i);
    if !(alt_i && alt_j) {
        return None;
    }
    Some(if triv_i && triv_j {
        LadybugKind::Planar
    } else {
        LadybugKind::Annular
    })
}

/// The ladybug matching on arcs `i < j` at `t`, if that face is a ladybug.
pub fn ladybug_matching(cube: &SurgeryCube, t: u32, i: usize, j: usize) -> Option<LadybugMatching> {
    let kind = ladybug_kind(cube, t, i, j)?;
    let e = cube.config(t);
    let (ni, nj) = (cube.node(i), cube.node(j));
    let right_i = right_ports(e.smoothing(ni)).map(|p| port(ni, p));
    let right_j = right_ports(e.smoothing(nj)).map(|p| port(nj, p));
    let far_end = |r: u32| {
        let mut q = e.link(r).0;
        while node_of(q) != ni && node_of(q) != nj {
            q = e.link(e.inner(q)).0;
        }
        q
    };
    let right_pair_consistent = right_i.iter().all(|&r| right_j.contains(&far_end(r)));
    let zi = cube.circles(t | 1 << i);
    let zj = cube.circles(t | 1 << j);
    let pairs = right_i.map(|r| (zi.port_circle[r as usize], zj.port_circle[r as usize]));
    Some(LadybugMatching {
        kind,
        arcs: (i, j),
        pairs,
        right_pair_consistent,
    })
}

/// One maximal chain of an index-2 interval: its first arc and the label
/// after the first step.
pub type IntervalChain = (usize, u32);

/// Splits the chains of the interval on arcs `i < j` starting at `t` into
/// pairs bounding intervals. Two chains always pair; four chains need a
/// ladybug face and pair a plus on `X` with a plus on the match of `X`.
pub fn pair_interval(
    cube: &SurgeryCube,
    t: u32,
    (i, j): (usize, usize),
    chains: &[IntervalChain],
    convention: Convention,
) -> Result<Vec<(usize, usize)>, String> {
    match chains.len() {
        2 => Ok(vec![(0, 1)]),
        4 => {
            let m = ladybug_matching(cube, t, i, j)
                .ok_or_else(|| format!("four chains on arcs R{}R{} without a ladybug", i + 1, j + 1))?;
            let new_plus = |arc: usize, z: u32| -> Option<usize> {
                let u = t | 1 << arc;
                let n = cube.node(arc);
                let zs = cube.circles(u);
                let outs = strand_ports(n, cube.config(u).smoothing(n)).map(|p| zs.port_circle[p as usize]);
                match outs.map(|c| z >> c & 1 == 1) {
                    [true, false] => Some(outs[0]),
                    [false, true] => Some(outs[1]),
                    _ => None,
                }
            };
            let mut pairs = Vec::new();
            for (a, &(arc, z)) in chains.iter().enumerate().filter(|(_, c)| c.0 == i) {
                let x = new_plus(arc, z).ok_or("ladybug label without a single plus")?;
                let target = m.partner(x, convention).ok_or("matching misses a circle")?;
                let b = chains
                    .iter()
                    .position(|&(arc2, z2)| arc2 == j && new_plus(arc2, z2) == Some(target))
                    .ok_or_else(|| format!("no partner for chain {a} in ladybug R{}R{}", i + 1, j + 1))?;
                pairs.push((a, b));
            }
            let mut used: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            used.sort_unstable();
            used.dedup();
            if pairs.len() != 2 || used.len() != 4 {
                return Err("ladybug matching is not a perfect matching".into());
            }
            Ok(pairs)
        }
        n => Err(format!("{n} chains in an index-2 interval")),
    }
}
