use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::config::AbstractConfig;
use super::graph::BoundaryGraph;
use super::ladybug::{ladybug_matching, Convention};
use super::poset::{strand_ports, SurgeryCube};

/// The two hexagons printed for `c₃` with decoration `(w₊, w₋w₋)`.
pub const C3_CYCLES: [[usize; 6]; 2] = [[1, 2, 9, 10, 6, 5], [3, 4, 11, 12, 8, 7]];

/// Number of types of basic index-3 configurations with no leaf or co-leaf.
pub const BASIC_TYPES: usize = 22;

/// Classes of basic index-3 configurations without leaves or co-leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub configs: usize,
    pub classes: usize,
    pub self_dual: usize,
    /// The dual of every class is again a harvested class.
    pub dual_closed: bool,
    /// Class sizes keyed by the circle census `(|Z(D)|, trivial, |Z(s(D))|, trivial)`.
    pub by_circles: BTreeMap<String, usize>,
}

pub fn census(configs: &[AbstractConfig]) -> Census {
    let core: Vec<&AbstractConfig> = configs
        .iter()
        .filter(|c| c.index() == 3 && c.is_basic() && !c.has_leaf() && !c.has_coleaf())
        .collect();
    let forms: BTreeMap<Vec<i32>, &AbstractConfig> = core
        .par_iter()
        .map(|c| (c.canonical_form(), *c))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let duals: Vec<Vec<i32>> = forms.values().map(|c| c.dual().canonical_form()).collect();
    let self_dual = forms.keys().zip(&duals).filter(|(f, d)| f == d).count();
    let dual_closed = duals.iter().all(|d| forms.contains_key(d));
    let mut by_circles = BTreeMap::new();
    for c in forms.values() {
        let (a, b) = (c.circles(), c.full_surgery().circles());
        let key = format!(
            "{}({}t) -> {}({}t)",
            a.len(),
            a.trivial.iter().filter(|t| **t).count(),
            b.len(),
            b.trivial.iter().filter(|t| **t).count()
        );
        *by_circles.entry(key).or_default() += 1;
    }
    Census {
        configs: core.len(),
        classes: forms.len(),
        self_dual,
        dual_closed,
        by_circles,
    }
}

/// A configuration recognised as `c₃` under an arc labelling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C3Instance {
    /// Arc positions playing `R₁, R₂, R₃`.
    pub arcs: [usize; 3],
    /// Hexagons over the vertex names `v₁ … v₁₂`.
    pub cycles: Vec<Vec<usize>>,
    pub reproduces: bool,
}

/// `(circles, trivial circles)` after surgery on `t`.
fn shape(cube: &SurgeryCube, t: u32) -> (usize, usize) {
    let z = cube.circles(t);
    (z.len(), z.trivial.iter().filter(|t| **t).count())
}

/// Arc labellings under which the cube has the circle census of `c₃`: one
/// trivial circle; `R₁`, `R₂` each cut it into two essential circles, `R₃`
/// into two trivial ones; `R₁R₂` leaves three circles, one trivial; the other
/// pairs leave one trivial circle; all three leave two trivial circles.
pub fn c3_labellings(cube: &SurgeryCube) -> Vec<[usize; 3]> {
    if cube.index() != 3 {
        return Vec::new();
    }
    (0..3)
        .permutations(3)
        .map(|p| [p[0], p[1], p[2]])
        .filter(|&[r1, r2, r3]| {
            let m = |s: &[usize]| s.iter().fold(0u32, |m, &i| m | 1 << i);
            shape(cube, 0) == (1, 1)
                && shape(cube, m(&[r1])) == (2, 0)
                && shape(cube, m(&[r2])) == (2, 0)
                && shape(cube, m(&[r3])) == (2, 2)
                && shape(cube, m(&[r1, r2])) == (3, 1)
                && shape(cube, m(&[r1, r3])) == (1, 1)
                && shape(cube, m(&[r2, r3])) == (1, 1)
                && shape(cube, 7) == (2, 2)
        })
        .collect()
}

/// Circle of `s_{a}(D)` away from the strands of arc `b`.
fn untouched(cube: &SurgeryCube, a: usize, b: usize) -> Option<usize> {
    let t = 1u32 << a;
    let z = cube.circles(t);
    let n = cube.node(b);
    let touched: BTreeSet<usize> = strand_ports(n, cube.config(t).smoothing(n))
        .iter()
        .map(|&p| z.port_circle[p as usize])
        .collect();
    let rest: Vec<usize> = (0..z.len()).filter(|c| !touched.contains(c)).collect();
    (rest.len() == 1).then(|| rest[0])
}

/// Circle of `s_{b}(D)` whose plus label, after surgery on `a`, always lands
/// on `target` of `s_{ab}(D)`.
fn carried_to(cube: &SurgeryCube, b: usize, a: usize, target: usize) -> Option<usize> {
    let t = 1u32 << b;
    let hits: Vec<usize> = (0..cube.circles(t).len())
        .filter(|&c| {
            let images = cube.successors(t, 1 << c, a);
            !images.is_empty() && images.iter().all(|m| m >> target & 1 == 1)
        })
        .collect();
    (hits.len() == 1).then(|| hits[0])
}

/// Names the chains of `c₃` with decoration `(w₊, w₋w₋)` as `v₁ … v₁₂`
/// (ordered by first arc, plus on `Z₁` before minus, then second arc) and
/// returns the hexagons of its boundary graph in those names.
///
/// `Z₁` of `s_{R₁}` is the circle `R₂` leaves alone; `Z₁` of `s_{R₂}` is the
/// circle whose plus ends on the same circle of `s_{R₁R₂}`; `Z₁` of `s_{R₃}`
/// is the right-pair partner of `Z₁` of `s_{R₁}` across the face `R₁R₃`.
pub fn c3_cycles(cube: &SurgeryCube, [r1, r2, r3]: [usize; 3], convention: Convention) -> Result<Vec<Vec<usize>>, String> {
    let z1_r1 = untouched(cube, r1, r2).ok_or("R2 does not act on a single circle of s_R1")?;
    let z1_r12 = cube.step(1 << r1, r2).carried[z1_r1].ok_or("Z1 of s_R1 is not carried by R2")?;
    let z1_r2 = carried_to(cube, r2, r1, z1_r12).ok_or("no circle of s_R2 feeds Z1 of s_R1R2")?;
    let face = ladybug_matching(cube, 0, r1.min(r3), r1.max(r3)).ok_or("face R1R3 is not a ladybug")?;
    let z1_r3 = face
        .pairs
        .iter()
        .find_map(|&(a, b)| if r1 < r3 { (a == z1_r1).then_some(b) } else { (b == z1_r1).then_some(a) })
        .ok_or("Z1 of s_R1 is unmatched")?;
    let graph = BoundaryGraph::new(cube, 1, 0, convention).map_err(|e| e.to_string())?;
    if graph.chains.len() != 12 {
        return Err(format!("{} chains instead of 12", graph.chains.len()));
    }
    let rank = |a: usize| [r1, r2, r3].iter().position(|&r| r == a).unwrap();
    let keys: Vec<(usize, bool, usize)> = graph
        .chains
        .iter()
        .map(|c| {
            let first = c.order[0];
            let z1 = [z1_r1, z1_r2, z1_r3][rank(first)];
            (rank(first), c.labels[1] >> z1 & 1 == 0, rank(c.order[1]))
        })
        .collect();
    let sorted: Vec<usize> = (0..12).sorted_by_key(|&v| keys[v]).collect();
    let mut name = vec![0; 12];
    for (k, &v) in sorted.iter().enumerate() {
        name[v] = k + 1;
    }
    if keys.iter().collect::<BTreeSet<_>>().len() != 12 {
        return Err("chain names collide".into());
    }
    let verdict = graph.verdict();
    if !verdict.two_regular {
        return Err(format!("boundary graph is not 2-regular: {:?}", graph.anomalies));
    }
    let mut cycles: Vec<Vec<usize>> = verdict
        .cycles
        .iter()
        .map(|c| normalise(&c.iter().map(|&v| name[v]).collect::<Vec<_>>()))
        .collect();
    cycles.sort();
    Ok(cycles)
}

/// Rotates a cycle to start at its least vertex, heading to the smaller neighbour.
pub fn normalise(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let k = (0..n).min_by_key(|&i| cycle[i]).unwrap_or(0);
    let forward: Vec<usize> = (0..n).map(|i| cycle[(k + i) % n]).collect();
    let backward: Vec<usize> = (0..n).map(|i| cycle[(k + n - i) % n]).collect();
    forward.min(backward)
}

/// Every harvested configuration with the circle census of `c₃`, checked
/// against the printed hexagons.
pub fn c3_instances(configs: &[AbstractConfig], convention: Convention) -> Vec<C3Instance> {
    let expected: Vec<Vec<usize>> = C3_CYCLES.iter().map(|c| normalise(c)).sorted().collect();
    configs
        .par_iter()
        .flat_map_iter(|c| {
            let cube = SurgeryCube::new(c);
            let labellings = c3_labellings(&cube);
            let expected = &expected;
            labellings
                .into_iter()
                .map(|arcs| {
                    let cycles = c3_cycles(&cube, arcs, convention).unwrap_or_default();
                    C3Instance {
                        arcs,
                        reproduces: cycles == *expected,
                        cycles,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}
