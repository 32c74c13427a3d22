//! The invariant suite run over a corpus: differential identities, the
//! skein/Khovanov decomposition, transverse extremes, Markov maps, moduli
//! checks, the spectral bound and sign-assignment robustness.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Ring;
use crate::corpus::CorpusEntry;
use crate::diagram::{BraidLetter, BraidWord, CrossingPermutation, Sign};
use crate::error::Result;
use crate::khovanov::{decompose, khovanov_homology, spectral_bound, ComplexPair};
use crate::moduli::{verify_moduli, Convention, BASIC_TYPES};
use crate::skein::{build_skein_complex, skein_homology, StateCube, Theory};
use crate::transverse::{
    check_stabilization, conjugation_check, diagram_extremes, oriented_state, psi_generator, table_difference,
    transverse_report, StabilizationVariant,
};

/// One suite line: a property checked over many items.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteCheck {
    pub criterion: u8,
    pub name: String,
    pub holds: bool,
    pub checked: usize,
    pub failed: usize,
    /// Smallest failing item and what went wrong.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
    pub seconds: f64,
}

impl SuiteCheck {
    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Runs `check` on every item in parallel. `Ok(None)` passes; `Ok(Some(why))`
/// and errors fail. The reported counterexample minimises `size`.
fn over<T: Sync>(
    criterion: u8,
    name: &str,
    items: &[T],
    size: impl Fn(&T) -> (usize, String) + Sync,
    check: impl Fn(&T) -> Result<Option<String>> + Sync,
) -> SuiteCheck {
    let start = Instant::now();
    let failures: Vec<((usize, String), String)> = items
        .par_iter()
        .filter_map(|item| {
            let why = match check(item) {
                Ok(None) => return None,
                Ok(Some(why)) => why,
                Err(e) => format!("error: {e}"),
            };
            Some((size(item), why))
        })
        .collect();
    let counterexample = failures
        .iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|((_, name), why)| format!("{name}: {why}"));
    SuiteCheck {
        criterion,
        name: name.to_string(),
        holds: failures.is_empty(),
        checked: items.len(),
        failed: failures.len(),
        counterexample,
        note: String::new(),
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn entry_size(e: &&CorpusEntry) -> (usize, String) {
    (e.word.crossings(), e.name.clone())
}

fn braid_size(b: &&BraidWord) -> (usize, String) {
    (b.len() + b.strands(), b.to_string())
}

fn braids(entries: &[CorpusEntry]) -> Vec<&BraidWord> {
    entries.iter().filter_map(|e| e.braid.as_ref()).collect()
}

/// `∂² = 0` for both differentials, as products of the full matrices.
pub fn differentials_square_to_zero(entries: &[CorpusEntry]) -> SuiteCheck {
    let items: Vec<&CorpusEntry> = entries.iter().collect();
    over(1, "skein and Khovanov differentials square to zero", &items, entry_size, |e| {
        let cube = StateCube::new(&e.word)?;
        let n = cube.generator_count();
        for theory in [Theory::Skein, Theory::Khovanov] {
            let d = cube.differential(theory).matrix(n);
            if !d.mul(&d).is_zero() {
                return Ok(Some(format!("{theory:?} differential squared is nonzero")));
            }
        }
        Ok(None)
    })
}

/// `∂_Kh = ∂₀ + ∂₋₂` with `∂₀ = ∂_Sk`.
pub fn decomposition(entries: &[CorpusEntry]) -> SuiteCheck {
    let items: Vec<&CorpusEntry> = entries.iter().collect();
    over(2, "Khovanov differential splits as skein part plus f-2 part", &items, entry_size, |e| {
        let d = decompose(&ComplexPair::new(&e.word)?)?;
        Ok((d.report.d0_entries != d.report.skein_entries).then(|| {
            format!("{} entries in the f-preserving part, {} in the skein differential", d.report.d0_entries, d.report.skein_entries)
        }))
    })
}

/// Every check of the transverse report of `σ₁σ₂⁻¹`.
pub fn worked_braid() -> SuiteCheck {
    let b = BraidWord::from_tokens(3, &[1, -2]);
    over(3, "worked braid transverse data", &[&b], braid_size, |b| {
        let r = transverse_report(b, Ring::Integers)?;
        let failed: Vec<String> = r.failures().map(|c| c.name.clone()).collect();
        Ok((!failed.is_empty()).then(|| failed.join("; ")))
    })
}

/// `f_min = f_min(sl) = −b` and `S_{−b} = {ψ}`, all minus on the oriented resolution.
pub fn extreme_filtration(entries: &[CorpusEntry]) -> SuiteCheck {
    over(4, "f_min = f_min(sl) = -b and S_-b is psi", &braids(entries), braid_size, |b| {
        let cube = StateCube::new(&b.to_slice_word())?;
        let ext = diagram_extremes(&cube);
        let minus_b = -(b.strands() as i64);
        if ext.f_min != minus_b {
            return Ok(Some(format!("f_min = {}", ext.f_min)));
        }
        if ext.f_min_by_q.get(&b.self_linking()) != Some(&minus_b) {
            return Ok(Some(format!("f_min at sl = {:?}", ext.f_min_by_q.get(&b.self_linking()))));
        }
        let psi = psi_generator(&cube);
        let bottom: Vec<usize> = (0..cube.generator_count()).filter(|&i| cube.grading(i).f == minus_b).collect();
        let oriented = oriented_state(cube.word());
        let all_minus = psi.labels.iter().all(|l| !l.is_plus() && !l.is_trivial());
        if bottom != vec![cube.index_of(&psi)?] || psi.state != oriented || !all_minus {
            return Ok(Some(format!("S_-b has {} generators", bottom.len())));
        }
        Ok(None)
    })
}

/// The three parts of the `j_min` statement, as separate lines.
pub fn j_min(entries: &[CorpusEntry]) -> Vec<SuiteCheck> {
    let items: Vec<&CorpusEntry> = entries.iter().collect();
    let formula = over(5, "j_min formula equals the enumerated minimum", &items, entry_size, |e| {
        let ext = diagram_extremes(&StateCube::new(&e.word)?);
        Ok((ext.j_min_formula != ext.j_min_enumerated)
            .then(|| format!("formula {} vs enumerated {}", ext.j_min_formula, ext.j_min_enumerated)))
    });
    let braids = braids(entries);
    let sl = over(5, "j_min equals sl", &braids, braid_size, |b| {
        let ext = diagram_extremes(&StateCube::new(&b.to_slice_word())?);
        Ok((ext.j_min_formula != b.self_linking()).then(|| format!("j_min {} vs sl {}", ext.j_min_formula, b.self_linking())))
    });
    let bucket = over(5, "bucket (j_min, -b) is one generator with homology Z", &braids, braid_size, |b| {
        let skein = build_skein_complex(&b.to_slice_word())?;
        let j = diagram_extremes(&skein.cube).j_min_formula;
        let Some(bucket) = skein.bucket(j, Some(-(b.strands() as i64))) else {
            return Ok(Some("bucket is empty".into()));
        };
        let size: usize = bucket.groups.iter().map(Vec::len).sum();
        if size != 1 {
            return Ok(Some(format!("bucket has {size} generators")));
        }
        let h = bucket.h_min;
        let g = bucket.homology(h, Ring::Integers)?;
        Ok((g.free_rank != 1 || !g.torsion.is_empty()).then(|| format!("homology {g}")))
    });
    vec![formula, sl, bucket]
}

/// Pairs related by conjugation, braid-like Reidemeister II and III, and a
/// control pair that must differ.
pub fn curated_pairs() -> (Vec<(&'static str, BraidWord, BraidWord)>, (BraidWord, BraidWord)) {
    let w = BraidWord::from_tokens;
    let r2 = |b: &BraidWord, at: usize, i: usize, sign: Sign| b.insert_cancelling_pair(at, BraidLetter::new(i, sign)).unwrap();
    let pairs = vec![
        ("rotation", w(3, &[1, -2]), w(3, &[-2, 1])),
        ("conjugation by s2", w(3, &[1, -2]), w(3, &[2, 1, -2, -2])),
        ("rotation", w(3, &[1, -2, 1, -2]), w(3, &[-2, 1, -2, 1])),
        ("conjugation by s1", w(4, &[2, -3, 1]), w(4, &[1, 2, -3, 1, -1])),
        ("rotation", w(4, &[1, 2, 3]), w(4, &[3, 1, 2])),
        ("R2", w(3, &[1, -2]), r2(&w(3, &[1, -2]), 1, 2, Sign::Positive)),
        ("R2", w(2, &[1, 1, 1]), r2(&w(2, &[1, 1, 1]), 0, 1, Sign::Negative)),
        ("R2", w(4, &[1, -3, 2]), r2(&w(4, &[1, -3, 2]), 2, 3, Sign::Negative)),
        ("R3", w(3, &[1, 2, 1]), w(3, &[2, 1, 2])),
        ("R3", w(3, &[1, 2, 1, -2]), w(3, &[2, 1, 2, -2])),
        ("R3", w(3, &[-1, -2, -1]), w(3, &[-2, -1, -2])),
        ("R3", w(4, &[3, 1, 2, 1]), w(4, &[3, 2, 1, 2])),
    ];
    (pairs, (w(2, &[1, 1, 1]), w(2, &[1, 1, -1])))
}

/// Skein tables agree on every curated pair and differ on the control.
pub fn invariance() -> SuiteCheck {
    let (pairs, control) = curated_pairs();
    let items: Vec<(String, &BraidWord, &BraidWord)> =
        pairs.iter().map(|(k, a, b)| (format!("{k}: {a} ~ {b}"), a, b)).collect();
    let mut check = over(6, "skein tables agree across conjugation, R2 and R3", &items, |p| (p.1.len(), p.0.clone()), |p| {
        let v = conjugation_check(p.1, p.2, Ring::Integers)?;
        Ok((!v.holds()).then(|| format!("{:?}", v.difference)))
    });
    let differs = conjugation_check(&control.0, &control.1, Ring::Integers).map(|v| !v.tables_equal);
    if differs != Ok(true) {
        check.holds = false;
        check.failed += 1;
        check.counterexample.get_or_insert_with(|| format!("control {} vs {} does not differ", control.0, control.1));
    }
    check.checked += 1;
    check.with_note(format!("{} pairs and one control", pairs.len()))
}

/// One line per stabilization check, over every braid stabilized once.
pub fn markov(entries: &[CorpusEntry], variant: StabilizationVariant) -> Vec<SuiteCheck> {
    let braids = braids(entries);
    let start = Instant::now();
    let reports: Vec<(&BraidWord, Result<Vec<(String, bool, String)>>)> = braids
        .par_iter()
        .map(|b| {
            let r = check_stabilization(b, variant).map(|r| {
                r.checks.into_iter().map(|c| (c.name, c.holds, c.detail)).collect()
            });
            (*b, r)
        })
        .collect();
    let mut names: Vec<String> = Vec::new();
    let mut tally: BTreeMap<String, (usize, Option<((usize, String), String)>)> = BTreeMap::new();
    for (b, r) in &reports {
        let size = braid_size(b);
        match r {
            Ok(checks) => {
                for (name, holds, detail) in checks {
                    if !names.contains(name) {
                        names.push(name.clone());
                    }
                    let t = tally.entry(name.clone()).or_default();
                    if !holds {
                        t.0 += 1;
                        if t.1.as_ref().is_none_or(|m| size < m.0) {
                            t.1 = Some((size.clone(), detail.clone()));
                        }
                    }
                }
            }
            Err(e) => {
                let t = tally.entry("stabilization maps build".into()).or_default();
                t.0 += 1;
                t.1.get_or_insert((size, e.to_string()));
            }
        }
    }
    if tally.contains_key("stabilization maps build") {
        names.push("stabilization maps build".into());
    }
    let seconds = start.elapsed().as_secs_f64();
    names
        .into_iter()
        .map(|name| {
            let (failed, example) = tally.remove(&name).unwrap_or_default();
            SuiteCheck {
                criterion: 7,
                holds: failed == 0,
                checked: braids.len(),
                failed,
                counterexample: example.map(|((_, b), why)| format!("{b}: {why}")),
                note: String::new(),
                seconds,
                name,
            }
        })
        .collect()
}

/// Moduli checks on every decorated configuration of index 2 and 3.
pub fn moduli(entries: &[CorpusEntry]) -> Result<Vec<SuiteCheck>> {
    let words: Vec<_> = entries.iter().map(|e| e.word.clone()).collect();
    let start = Instant::now();
    let two = verify_moduli(&words, 2, Convention::Right)?;
    let t2 = start.elapsed().as_secs_f64();
    let three = verify_moduli(&words, 3, Convention::Right)?;
    let t3 = start.elapsed().as_secs_f64() - t2;
    let line = |name: &str, checked: usize, failed: usize, example: Option<String>, note: String, seconds: f64| SuiteCheck {
        criterion: 8,
        name: name.into(),
        holds: failed == 0 && checked > 0,
        checked,
        failed,
        counterexample: example,
        note,
        seconds,
    };
    let first_bad2 = two.interval_entries.iter().find(|e| !e.holds).map(|e| format!("{:?}", e.check));
    let first_bad3 = three
        .hexagon_entries
        .iter()
        .find(|e| !e.check.verdict.holds() || !e.check.anomalies.is_empty())
        .map(|e| format!("{:?}", e.check));
    let bad3 = three
        .hexagon_entries
        .iter()
        .filter(|e| !e.check.verdict.holds() || !e.check.anomalies.is_empty())
        .count();
    let first_dual = three.hexagon_entries.iter().find(|e| !e.check.dual.holds()).map(|e| format!("{:?}", e.check.dual));
    let c3_bad = three.c3.iter().filter(|c| !c.reproduces).count();
    let census = three.census.clone();
    Ok(vec![
        line(
            "index-2 intervals have 2 or 4 chains, 4 exactly at ladybugs",
            two.decorated,
            two.failures,
            first_bad2,
            format!("chains {:?}, {} distinct configurations", two.chain_counts, two.distinct_configs),
            t2,
        ),
        line(
            "index-3 boundary graphs are hexagons covering the hexagon trivially",
            three.decorated,
            bad3,
            first_bad3,
            format!("cycle shapes {:?}, {} distinct configurations", three.cycle_shapes, three.distinct_configs),
            t3,
        ),
        line(
            "dual boundary graphs are isomorphic under the opposite matching",
            three.decorated,
            three.dual_failures,
            first_dual,
            String::new(),
            t3,
        ),
        line(
            "c3 reproduces v1-v2-v9-v10-v6-v5 and v3-v4-v11-v12-v8-v7",
            three.c3.len(),
            c3_bad,
            three.c3.iter().find(|c| !c.reproduces).map(|c| format!("{:?}", c.cycles)),
            match census {
                Some(c) => format!(
                    "census: {} leafless classes (expected {BASIC_TYPES}), {} self-dual",
                    c.classes, c.self_dual
                ),
                None => String::new(),
            },
            t3,
        ),
    ])
}

/// `dim H_Kh^{h,q} ≤ Σ_f dim H_Sk^{h,q,f}` over `Z₂`.
pub fn spectral(entries: &[CorpusEntry]) -> SuiteCheck {
    let items: Vec<&CorpusEntry> = entries.iter().collect();
    over(9, "Khovanov ranks are bounded by skein ranks over Z2", &items, entry_size, |e| {
        let v = spectral_bound(&ComplexPair::new(&e.word)?)?;
        Ok(v.first().map(|v| format!("{v:?}")))
    })
}

/// Diagrams used for the crossing-order check.
pub fn robustness_sample(entries: &[CorpusEntry]) -> Vec<&CorpusEntry> {
    let mut picked: Vec<&CorpusEntry> = entries.iter().filter(|e| e.word.crossings() >= 4).collect();
    picked.sort_by_key(|e| (std::cmp::Reverse(e.word.crossings()), e.name.clone()));
    let step = (picked.len() / 5).max(1);
    picked.into_iter().step_by(step).take(5).collect()
}

/// Homology tables unchanged when the sign assignment uses another crossing order.
pub fn permutation_robustness(entries: &[CorpusEntry]) -> SuiteCheck {
    let sample = robustness_sample(entries);
    let perms = [
        CrossingPermutation::Reverse,
        CrossingPermutation::Shuffle(1),
        CrossingPermutation::Shuffle(2024),
    ];
    over(10, "homology unchanged under crossing reordering", &sample, entry_size, |e| {
        let sk = skein_homology(&e.word, Ring::Integers)?;
        let kh = khovanov_homology(&e.word, Ring::Integers)?;
        for p in &perms {
            let w = p.apply(&e.word)?;
            if let Some(d) = table_difference(&sk, &skein_homology(&w, Ring::Integers)?) {
                return Ok(Some(format!("skein, {p:?}: {d:?}")));
            }
            if let Some(d) = table_difference(&kh, &khovanov_homology(&w, Ring::Integers)?) {
                return Ok(Some(format!("Khovanov, {p:?}: {d:?}")));
            }
        }
        Ok(None)
    })
}

/// Every suite line over `entries`.
pub fn run_suite(entries: &[CorpusEntry]) -> Result<Vec<SuiteCheck>> {
    let mut out = vec![
        differentials_square_to_zero(entries),
        decomposition(entries),
        worked_braid(),
        extreme_filtration(entries),
    ];
    out.extend(j_min(entries));
    out.push(invariance());
    out.extend(markov(entries, StabilizationVariant::Plain));
    out.extend(moduli(entries)?);
    out.push(spectral(entries));
    out.push(permutation_robustness(entries));
    Ok(out)
}
