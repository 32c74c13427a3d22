use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::ladybug::{ladybug_kind, pair_interval, Convention, LadybugKind};
use super::poset::{build_poset, dual_chain, Chain, DecoratedConfig, SurgeryCube};
use crate::error::Result;

/// Which hexagon edge an interval covers: the index-2 face with a fixed first
/// arc, or with a fixed last arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FaceTag {
    First(usize),
    Last(usize),
}

impl fmt::Display for FaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceTag::First(a) => write!(f, "first=R{}", a + 1),
            FaceTag::Last(a) => write!(f, "last=R{}", a + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub tag: FaceTag,
}

/// `∂M(D, x, y)` for an index-3 decorated configuration: vertices are the
/// maximal chains, edges the intervals of the six index-2 faces.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryGraph {
    pub chains: Vec<Chain>,
    pub edges: Vec<Edge>,
    /// Faces whose chains could not be paired.
    pub anomalies: Vec<String>,
    /// Faces that are ladybugs, with the surgery mask they start from.
    pub ladybugs: Vec<(u32, (usize, usize), LadybugKind)>,
}

/// Cycle structure of a boundary graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphVerdict {
    pub vertices: usize,
    pub two_regular: bool,
    /// Components as vertex cycles, each starting at its least vertex.
    pub cycles: Vec<Vec<usize>>,
    pub all_hexagons: bool,
    /// Every component meets each arc order and each face tag once.
    pub trivial_cover: bool,
}

impl GraphVerdict {
    pub fn holds(&self) -> bool {
        self.two_regular && self.all_hexagons && self.trivial_cover
    }
}

impl BoundaryGraph {
    pub fn new(cube: &SurgeryCube, y: u32, x: u32, convention: Convention) -> Result<Self> {
        let chains = build_poset(cube, y, x)?.chains;
        let mut edges = Vec::new();
        let mut anomalies = Vec::new();
        let mut ladybugs = BTreeSet::new();
        // Intervals ending at ({a1, a2}, L2), then at ({a1}, L1) onwards.
        let mut bottom: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
        let mut top: BTreeMap<(usize, u32), Vec<usize>> = BTreeMap::new();
        for (v, c) in chains.iter().enumerate() {
            bottom.entry((c.mask(2), c.labels[2])).or_default().push(v);
            top.entry((c.order[0], c.labels[1])).or_default().push(v);
        }
        let mut add = |t: u32, arcs: (usize, usize), members: &[usize], step: usize, tag: FaceTag| {
            let (i, j) = (arcs.0.min(arcs.1), arcs.0.max(arcs.1));
            if let Some(kind) = ladybug_kind(cube, t, i, j) {
                ladybugs.insert((t, (i, j), kind));
            }
            let local: Vec<(usize, u32)> = members
                .iter()
                .map(|&v| (chains[v].order[step], chains[v].labels[step + 1]))
                .collect();
            match pair_interval(cube, t, (i, j), &local, convention) {
                Ok(pairs) => edges.extend(pairs.into_iter().map(|(a, b)| Edge {
                    a: members[a].min(members[b]),
                    b: members[a].max(members[b]),
                    tag,
                })),
                Err(e) => anomalies.push(format!("{tag} from mask {t:03b}: {e}")),
            }
        };
        for ((mask, _), members) in &bottom {
            let c = &chains[members[0]];
            let last = c.order[2];
            let arcs: Vec<usize> = (0..3).filter(|&a| mask >> a & 1 == 1).collect();
            add(0, (arcs[0], arcs[1]), members, 0, FaceTag::Last(last));
        }
        for ((first, _), members) in &top {
            let arcs: Vec<usize> = (0..3).filter(|&a| a != *first).collect();
            add(1 << first, (arcs[0], arcs[1]), members, 1, FaceTag::First(*first));
        }
        edges.sort();
        Ok(BoundaryGraph {
            chains,
            edges,
            anomalies,
            ladybugs: ladybugs.into_iter().collect(),
        })
    }

    pub fn of(dc: &DecoratedConfig, convention: Convention) -> Result<Self> {
        BoundaryGraph::new(&SurgeryCube::new(&dc.config), dc.y, dc.x, convention)
    }

    fn neighbours(&self) -> Vec<Vec<(usize, FaceTag)>> {
        let mut adj = vec![Vec::new(); self.chains.len()];
        for e in &self.edges {
            adj[e.a].push((e.b, e.tag));
            adj[e.b].push((e.a, e.tag));
        }
        adj
    }

    pub fn verdict(&self) -> GraphVerdict {
        let adj = self.neighbours();
        let n = self.chains.len();
        let two_regular = self.anomalies.is_empty() && adj.iter().all(|a| a.len() == 2);
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        let mut trivial_cover = true;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            // Component by search, then walked as a cycle when 2-regular.
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                for &(w, _) in &adj[comp[k]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            let orders: BTreeSet<&Vec<usize>> = comp.iter().map(|&v| &self.chains[v].order).collect();
            let tags: BTreeSet<FaceTag> = comp.iter().flat_map(|&v| adj[v].iter().map(|e| e.1)).collect();
            let edge_count = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
            trivial_cover &= orders.len() == comp.len() && comp.len() == 6 && tags.len() == 6 && edge_count == 6;
            cycles.push(if two_regular { walk(&adj, start) } else { comp });
        }
        let all_hexagons = two_regular && cycles.iter().all(|c| c.len() == 6);
        GraphVerdict {
            vertices: n,
            two_regular,
            cycles,
            all_hexagons,
            trivial_cover,
        }
    }
}

/// Walks the cycle through `start`, leaving towards the smaller neighbour.
fn walk(adj: &[Vec<(usize, FaceTag)>], start: usize) -> Vec<usize> {
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[start].iter().map(|e| e.0).min().unwrap();
    while cur != start {
        cycle.push(cur);
        let next = adj[cur].iter().map(|e| e.0).find(|&w| w != prev).unwrap_or(prev);
        prev = cur;
        cur = next;
        if cycle.len() > adj.len() {
            break;
        }
    }
    cycle
}

/// Outcome of comparing `∂M(D, x, y)` with `∂M_*(D*, y*, x*)` along the
/// chain bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualIso {
    pub vertices: usize,
    pub dual_vertices: usize,
    /// The bijection sends chains onto the chains of the dual poset.
    pub poset_reversed: bool,
    pub edges_preserved: bool,
}

impl DualIso {
    pub fn holds(&self) -> bool {
        self.poset_reversed && self.edges_preserved
    }
}

/// Checks that chain reversal identifies the boundary graph of `(D, x, y)`
/// under `convention` with that of the dual under the opposite convention.
pub fn dual_graph_iso(dc: &DecoratedConfig, convention: Convention) -> Result<DualIso> {
    let cube = SurgeryCube::new(&dc.config);
    let graph = BoundaryGraph::new(&cube, dc.y, dc.x, convention)?;
    let dual = dc.config.dual();
    let dcube = SurgeryCube::new(&dual);
    let mask = |n: usize| (1u32 << n) - 1;
    let ystar = !dc.x & mask(cube.circles(cube.full()).len());
    let xstar = !dc.y & mask(cube.circles(0).len());
    let dgraph = BoundaryGraph::new(&dcube, ystar, xstar, convention.opposite())?;
    let index: BTreeMap<&Chain, usize> = dgraph.chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let image: Vec<Option<usize>> = graph
        .chains
        .iter()
        .map(|c| index.get(&dual_chain(c, |t| cube.circles(t).len())).copied())
        .collect();
    let poset_reversed = graph.chains.len() == dgraph.chains.len() && image.iter().all(Option::is_some);
    let edges_preserved = poset_reversed && {
        let mapped: BTreeSet<(usize, usize)> = graph
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (image[e.a].unwrap(), image[e.b].unwrap());
                (a.min(b), a.max(b))
            })
            .collect();
        let target: BTreeSet<(usize, usize)> = dgraph.edges.iter().map(|e| (e.a, e.b)).collect();
        mapped == target && graph.edges.len() == dgraph.edges.len()
    };
    Ok(DualIso {
        vertices: graph.chains.len(),
        dual_vertices: dgraph.chains.len(),
        poset_reversed,
        edges_preserved,
    })
}
