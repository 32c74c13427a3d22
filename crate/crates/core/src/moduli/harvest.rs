use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::classify::{c3_instances, census, C3Instance, Census};
use super::config::{port, AbstractConfig};
use super::graph::{dual_graph_iso, BoundaryGraph, DualIso, GraphVerdict};
use super::ladybug::{ladybug_kind, ladybug_matching, Convention, LadybugKind};
use super::poset::{build_poset, decorations, poset_reversal, DecoratedConfig, SurgeryCube};
use crate::diagram::resolve::NONE;
use crate::diagram::{Resolver, SliceWord, Smoothing, State};
use crate::error::{Error, Result};

/// The configuration at `state` on the crossings `active` (all 0 in `state`,
/// in arc order): nodes are the active crossings, circles the ones of the
/// resolution that meet them.
pub fn extract(resolver: &Resolver, state: State, active: &[usize]) -> Result<AbstractConfig> {
    let topo = &resolver.topo;
    let n = topo.crossings();
    if state.len() != n {
        return Err(Error::StateLength {
            expected: n,
            found: state.len(),
        });
    }
    if let Some(&c) = active.iter().find(|&&c| c >= n || state.get(c)) {
        return Err(Error::ArcSubset(format!("crossing {c} is not a 0-resolved crossing of {state}")));
    }
    let smooth: Vec<Smoothing> = (0..n).map(|c| topo.smoothing(c, state)).collect();
    let mut node_of_crossing = vec![usize::MAX; n];
    for (i, &c) in active.iter().enumerate() {
        node_of_crossing[c] = i;
    }
    let mut link = Vec::with_capacity(4 * active.len());
    for &c in active {
        for p in 0..4u8 {
            let mut cur = topo.ports[c][p as usize];
            let mut w = 0;
            let q = loop {
                let ed = (cur >> 1) as usize;
                if ed < topo.seam {
                    w += if cur & 1 == 0 { 1 } else { -1 };
                }
                let other = cur ^ 1;
                let po = topo.port_of[other as usize];
                if po != NONE && node_of_crossing[po as usize / 4] != usize::MAX {
                    break port(node_of_crossing[po as usize / 4], (po % 4) as u8);
                }
                cur = topo.junction(other, |c, p| smooth[c].partner(p));
            };
            link.push((q, w));
        }
    }
    AbstractConfig::new(
        active.iter().map(|&c| smooth[c]).collect(),
        (0..active.len()).collect(),
        link,
    )
}

/// Every `(state, active set)` of the given index, with repeats.
fn extract_all(word: &SliceWord, index: usize) -> Result<Vec<AbstractConfig>> {
    let resolver = Resolver::new(word);
    let n = word.crossings();
    let mut out = Vec::new();
    for bits in 0..1u32 << n {
        let state = State::new(bits, n);
        let zeros: Vec<usize> = (0..n).filter(|&c| !state.get(c)).collect();
        for active in zeros.iter().copied().combinations(index) {
            out.push(extract(&resolver, state, &active)?);
        }
    }
    Ok(out)
}

fn dedupe(configs: impl IntoIterator<Item = AbstractConfig>) -> Vec<AbstractConfig> {
    let mut seen: HashMap<Vec<i32>, AbstractConfig> = HashMap::new();
    for c in configs {
        seen.entry(c.encoding()).or_insert(c);
    }
    let mut out: Vec<(Vec<i32>, AbstractConfig)> = seen.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, c)| c).collect()
}

/// Distinct configurations of the given index in the cube of `word`.
pub fn harvest_configs(word: &SliceWord, index: usize) -> Result<Vec<AbstractConfig>> {
    Ok(dedupe(extract_all(word, index)?))
}

/// Every decoration of every distinct configuration in the cube of `word`.
pub fn harvest_decorated(word: &SliceWord, index: usize) -> Result<Vec<DecoratedConfig>> {
    Ok(decorate(&harvest_configs(word, index)?))
}

fn decorate(configs: &[AbstractConfig]) -> Vec<DecoratedConfig> {
    configs
        .par_iter()
        .flat_map_iter(|c| {
            let cube = SurgeryCube::new(c);
            decorations(&cube).into_iter().map(move |(y, x)| DecoratedConfig {
                config: c.clone(),
                y,
                x,
            })
        })
        .collect()
}

/// Configurations harvested from a list of diagrams.
#[derive(Debug, Clone)]
pub struct Harvest {
    pub index: usize,
    pub diagrams: usize,
    /// Extractions before removing repeats.
    pub raw: usize,
    pub configs: Vec<AbstractConfig>,
}

pub fn harvest_corpus(words: &[SliceWord], index: usize) -> Result<Harvest> {
    let per: Vec<(usize, Vec<AbstractConfig>)> = words
        .par_iter()
        .map(|w| {
            let all = extract_all(w, index)?;
            Ok((all.len(), dedupe(all)))
        })
        .collect::<Result<_>>()?;
    let raw = per.iter().map(|p| p.0).sum();
    Ok(Harvest {
        index,
        diagrams: words.len(),
        raw,
        configs: dedupe(per.into_iter().flat_map(|p| p.1)),
    })
}

fn label_pair(dc: &DecoratedConfig) -> (String, String) {
    let cube = SurgeryCube::new(&dc.config);
    (cube.labels(0, dc.y), cube.labels(cube.full(), dc.x))
}

/// Checks on one index-2 decorated configuration.
#[derive(Debug, Clone, Serialize)]
pub struct IntervalCheck {
    pub y: String,
    pub x: String,
    pub chains: usize,
    pub ladybug: Option<LadybugKind>,
    pub leaf: bool,
    pub coleaf: bool,
    /// Ladybugs carry `w+` below and `w-` above.
    pub forced_labels: bool,
    pub right_pair_consistent: Option<bool>,
    pub paired: bool,
    pub poset_reversed: bool,
}

impl IntervalCheck {
    pub fn holds(&self) -> bool {
        matches!(self.chains, 2 | 4)
            && (self.chains == 4) == self.ladybug.is_some()
            && self.forced_labels
            && self.right_pair_consistent != Some(false)
            && self.paired
            && self.poset_reversed
    }

    pub fn kind(&self) -> String {
        match (self.ladybug, self.leaf, self.coleaf) {
            (Some(LadybugKind::Planar), ..) => "ladybug (planar)".into(),
            (Some(LadybugKind::Annular), ..) => "ladybug (annular)".into(),
            (None, true, true) => "leaf and co-leaf".into(),
            (None, true, false) => "leaf".into(),
            (None, false, true) => "co-leaf".into(),
            (None, false, false) => "no leaf or co-leaf".into(),
        }
    }
}

pub fn check_interval(dc: &DecoratedConfig, convention: Convention) -> Result<IntervalCheck> {
    if dc.config.index() != 2 {
        return Err(Error::Moduli(format!("index {} where 2 was expected", dc.config.index())));
    }
    let cube = SurgeryCube::new(&dc.config);
    let poset = build_poset(&cube, dc.y, dc.x)?;
    let ladybug = ladybug_kind(&cube, 0, 0, 1);
    let forced_labels = ladybug.is_none() || (dc.y == 1 && dc.x == 0);
    let right_pair_consistent = ladybug_matching(&cube, 0, 0, 1).map(|m| m.right_pair_consistent);
    let local: Vec<(usize, u32)> = poset.chains.iter().map(|c| (c.order[0], c.labels[1])).collect();
    let paired = super::ladybug::pair_interval(&cube, 0, (0, 1), &local, convention).is_ok();
    let (y, x) = label_pair(dc);
    Ok(IntervalCheck {
        y,
        x,
        chains: poset.chains.len(),
        ladybug,
        leaf: dc.config.has_leaf(),
        coleaf: dc.config.has_coleaf(),
        forced_labels,
        right_pair_consistent,
        paired,
        poset_reversed: poset_reversal(dc),
    })
}

/// Checks on one index-3 decorated configuration.
#[derive(Debug, Clone, Serialize)]
pub struct HexagonCheck {
    pub y: String,
    pub x: String,
    pub kind: String,
    pub ladybug_faces: usize,
    pub verdict: GraphVerdict,
    pub anomalies: Vec<String>,
    pub dual: DualIso,
}

impl HexagonCheck {
    pub fn holds(&self) -> bool {
        self.verdict.holds() && self.anomalies.is_empty() && self.dual.holds()
    }
}

pub fn check_hexagons(dc: &DecoratedConfig, convention: Convention) -> Result<HexagonCheck> {
    if dc.config.index() != 3 {
        return Err(Error::Moduli(format!("index {} where 3 was expected", dc.config.index())));
    }
    let graph = BoundaryGraph::of(dc, convention)?;
    let (y, x) = label_pair(dc);
    let kind = match (dc.config.has_leaf(), dc.config.has_coleaf()) {
        (true, _) => "leaf",
        (false, true) => "co-leaf",
        (false, false) => "no leaf or co-leaf",
    };
    Ok(HexagonCheck {
        y,
        x,
        kind: kind.into(),
        ladybug_faces: graph.ladybugs.len(),
        verdict: graph.verdict(),
        anomalies: graph.anomalies.clone(),
        dual: dual_graph_iso(dc, convention)?,
    })
}

/// One decorated configuration in a report.
#[derive(Debug, Clone, Serialize)]
pub struct Entry<T> {
    pub config: usize,
    pub check: T,
    pub holds: bool,
}

/// Summary over every decorated configuration harvested from a corpus.
#[derive(Debug, Clone, Serialize)]
pub struct ModuliReport {
    pub index: usize,
    pub convention: Convention,
    pub diagrams: usize,
    pub raw_configs: usize,
    pub distinct_configs: usize,
    pub decorated: usize,
    /// Decorated configurations by number of maximal chains.
    pub chain_counts: BTreeMap<usize, usize>,
    /// Decorated configurations by kind.
    pub kinds: BTreeMap<String, usize>,
    /// Index-3 graphs by sorted cycle lengths.
    pub cycle_shapes: BTreeMap<String, usize>,
    pub failures: usize,
    pub dual_failures: usize,
    pub census: Option<Census>,
    pub c3: Vec<C3Instance>,
    pub interval_entries: Vec<Entry<IntervalCheck>>,
    pub hexagon_entries: Vec<Entry<HexagonCheck>>,
}

impl ModuliReport {
    pub fn holds(&self) -> bool {
        self.failures == 0 && self.c3.iter().all(|c| c.reproduces)
    }
}

/// Harvests `words` at `index` (2 or 3) and checks every decorated configuration.
pub fn verify_moduli(words: &[SliceWord], index: usize, convention: Convention) -> Result<ModuliReport> {
    if !(2..=3).contains(&index) {
        return Err(Error::Moduli(format!("index {index} (expected 2 or 3)")));
    }
    let harvest = harvest_corpus(words, index)?;
    let decorated: Vec<(usize, DecoratedConfig)> = harvest
        .configs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, c)| {
            let cube = SurgeryCube::new(c);
            decorations(&cube).into_iter().map(move |(y, x)| {
                (
                    i,
                    DecoratedConfig {
                        config: c.clone(),
                        y,
                        x,
                    },
                )
            })
        })
        .collect();
    let mut report = ModuliReport {
        index,
        convention,
        diagrams: harvest.diagrams,
        raw_configs: harvest.raw,
        distinct_configs: harvest.configs.len(),
        decorated: decorated.len(),
        chain_counts: BTreeMap::new(),
        kinds: BTreeMap::new(),
        cycle_shapes: BTreeMap::new(),
        failures: 0,
        dual_failures: 0,
        census: None,
        c3: Vec::new(),
        interval_entries: Vec::new(),
        hexagon_entries: Vec::new(),
    };
    if index == 2 {
        let checks: Vec<Entry<IntervalCheck>> = decorated
            .par_iter()
            .map(|(i, dc)| {
                let check = check_interval(dc, convention)?;
                Ok(Entry {
                    config: *i,
                    holds: check.holds(),
                    check,
                })
            })
            .collect::<Result<_>>()?;
        for e in &checks {
            *report.chain_counts.entry(e.check.chains).or_default() += 1;
            *report.kinds.entry(e.check.kind()).or_default() += 1;
            report.failures += !e.holds as usize;
            report.dual_failures += !e.check.poset_reversed as usize;
        }
        report.interval_entries = checks;
    } else {
        let checks: Vec<Entry<HexagonCheck>> = decorated
            .par_iter()
            .map(|(i, dc)| {
                let check = check_hexagons(dc, convention)?;
                Ok(Entry {
                    config: *i,
                    holds: check.holds(),
                    check,
                })
            })
            .collect::<Result<_>>()?;
        for e in &checks {
            *report.chain_counts.entry(e.check.verdict.vertices).or_default() += 1;
            *report.kinds.entry(e.check.kind.clone()).or_default() += 1;
            let shape = e.check.verdict.cycles.iter().map(|c| c.len()).sorted().join("+");
            *report.cycle_shapes.entry(shape).or_default() += 1;
            report.failures += !e.holds as usize;
            report.dual_failures += !e.check.dual.holds() as usize;
        }
        report.hexagon_entries = checks;
        report.census = Some(census(&harvest.configs));
        report.c3 = c3_instances(&harvest.configs, convention);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::BraidWord;

    fn braid(b: usize, t: &[i64]) -> SliceWord {
        BraidWord::from_tokens(b, t).to_slice_word()
    }

    #[test]
    fn extracted_circles_match_the_resolution() {
        let w = braid(3, &[1, -2, 1, 2]);
        let r = Resolver::new(&w);
        let n = w.crossings();
        for bits in 0..1u32 << n {
            let state = State::new(bits, n);
            let zeros: Vec<usize> = (0..n).filter(|&c| !state.get(c)).collect();
            for k in 1..=zeros.len().min(3) {
                for active in zeros.iter().copied().combinations(k) {
                    let c = extract(&r, state, &active).unwrap();
                    for t in 0..1u32 << k {
                        let mut s = state;
                        for (i, &a) in active.iter().enumerate() {
                            if t >> i & 1 == 1 {
                                s = s.with(a, true);
                            }
                        }
                        let res = r.resolve(s).unwrap();
                        let touched: std::collections::BTreeSet<usize> =
                            active.iter().flat_map(|&a| res.incidence[a]).collect();
                        let want: Vec<bool> = touched.iter().map(|&i| res.circles[i].trivial).sorted().collect();
                        let got: Vec<bool> = c.surgery_mask(t).unwrap().circles().trivial.into_iter().sorted().collect();
                        assert_eq!(got, want, "state {state} active {active:?} mask {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn index_two_chain_counts() {
        let dcs = harvest_decorated(&braid(3, &[1, -2, 1, -2]), 2).unwrap();
        assert!(!dcs.is_empty());
        for dc in &dcs {
            let check = check_interval(dc, Convention::Right).unwrap();
            assert!(check.holds(), "{check:?}");
        }
    }

    #[test]
    fn too_few_crossings_harvest_nothing() {
        assert!(harvest_configs(&braid(2, &[1, 1]), 3).unwrap().is_empty());
    }

    #[test]
    fn trefoil_index_three() {
        let dcs = harvest_decorated(&braid(2, &[1, 1, 1]), 3).unwrap();
        assert!(!dcs.is_empty());
        for dc in &dcs {
            let check = check_hexagons(dc, Convention::Right).unwrap();
            assert!(check.holds(), "{check:?}");
        }
    }
}
