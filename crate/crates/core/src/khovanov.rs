//! The ordinary Khovanov complex on the same generators, its splitting by the
//! homotopical grading, and the inclusion of the extreme filtration level.
//!
//! Forgetting triviality turns `v±` and `w±` into `x±`, so the Khovanov
//! complex shares the generator numbering of [`StateCube`]. Its entries move
//! `f` by `0` or `-2`; the `0` part is exactly the skein differential.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{ExactMatrix, HomologyBasis, HomologyGroup, Ring};
use crate::diagram::SliceWord;
use crate::error::{Error, Result};
use crate::skein::{build_complex, homology_table, GradedComplex, HomologyTable, StateCube, Theory};

/// The Khovanov complex of a diagram, with `∂² = 0` checked in every block.
pub fn build_khovanov_complex(word: &SliceWord) -> Result<GradedComplex> {
    build_complex(StateCube::new(word)?, Theory::Khovanov)
}

/// Bigraded Khovanov homology (keys carry no `f`).
pub fn khovanov_homology(word: &SliceWord, ring: Ring) -> Result<HomologyTable> {
    homology_table(&build_khovanov_complex(word)?, ring)
}

/// Both complexes of one diagram over a shared cube.
#[derive(Debug, Clone)]
pub struct ComplexPair {
    pub skein: GradedComplex,
    pub khovanov: GradedComplex,
}

impl ComplexPair {
    pub fn new(word: &SliceWord) -> Result<Self> {
        let cube = StateCube::new(word)?;
        let skein = build_complex(cube.clone(), Theory::Skein)?;
        let khovanov = build_complex(cube, Theory::Khovanov)?;
        Ok(ComplexPair { skein, khovanov })
    }
}

/// Summary of `∂_Kh = ∂₀ + ∂₋₂` for one diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub generators: usize,
    pub khovanov_entries: usize,
    pub d0_entries: usize,
    pub d_minus2_entries: usize,
    pub skein_entries: usize,
    /// Per quantum grading: entries of `∂₀` and of `∂₋₂`.
    pub per_q: BTreeMap<i64, (usize, usize)>,
}

/// The two pieces of the Khovanov differential as global sparse matrices.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub d0: ExactMatrix,
    pub d_minus2: ExactMatrix,
    pub report: DecompositionReport,
}

fn global(n: usize, entries: &[(usize, usize, i64)]) -> ExactMatrix {
    ExactMatrix::from_triplets(n, n, entries.iter().map(|&(s, t, c)| (t, s, c)))
}

/// Splits the Khovanov differential by `f`-shift and checks every identity:
/// shifts lie in `{0, -2}`, the `0` part equals the skein differential
/// entrywise, and `∂₀² = ∂₀∂₋₂ + ∂₋₂∂₀ = ∂₋₂² = 0`.
pub fn decompose(pair: &ComplexPair) -> Result<Decomposition> {
    let cube = &pair.khovanov.cube;
    let n = cube.generator_count();
    let mut d0 = Vec::new();
    let mut dm2 = Vec::new();
    let mut per_q: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for &(s, t, c) in &pair.khovanov.differential.entries {
        let (gs, gt) = (cube.grading(s), cube.grading(t));
        let e = per_q.entry(gs.q).or_default();
        match gt.f - gs.f {
            0 => {
                d0.push((s, t, c));
                e.0 += 1;
            }
            -2 => {
                dm2.push((s, t, c));
                e.1 += 1;
            }
            shift => return Err(Error::FiltrationShift { shift }),
        }
    }
    if d0 != pair.skein.differential.entries {
        let first = d0
            .iter()
            .zip(&pair.skein.differential.entries)
            .position(|(a, b)| a != b)
            .unwrap_or(d0.len().min(pair.skein.differential.entries.len()));
        return Err(Error::NonzeroComposition(format!(
            "f-preserving Khovanov part differs from the skein differential at entry {first}"
        )));
    }
    let m0 = global(n, &d0);
    let m2 = global(n, &dm2);
    let checks = [
        ("d0*d0", m0.mul(&m0)),
        ("d0*d-2 + d-2*d0", m0.mul(&m2).add(&m2.mul(&m0))),
        ("d-2*d-2", m2.mul(&m2)),
    ];
    for (name, m) in checks {
        if !m.is_zero() {
            return Err(Error::NonzeroComposition(format!("{name} has {} nonzero entries", m.nnz())));
        }
    }
    let full = global(n, &pair.khovanov.differential.entries);
    if full != m0.add(&m2) {
        return Err(Error::NonzeroComposition("d_Kh differs from d0 + d-2".into()));
    }
    Ok(Decomposition {
        report: DecompositionReport {
            generators: n,
            khovanov_entries: pair.khovanov.differential.entries.len(),
            d0_entries: d0.len(),
            d_minus2_entries: dm2.len(),
            skein_entries: pair.skein.differential.entries.len(),
            per_q,
        },
        d0: m0,
        d_minus2: m2,
    })
}

/// [`decompose`] from a diagram.
pub fn decompose_differential(word: &SliceWord) -> Result<Decomposition> {
    decompose(&ComplexPair::new(word)?)
}

/// `min f` over generators of quantum grading `q`.
pub fn f_min(cube: &StateCube, q: i64) -> Option<i64> {
    (0..cube.generator_count())
        .map(|i| cube.grading(i))
        .filter(|g| g.q == q)
        .map(|g| g.f)
        .min()
}

/// The filtration of one quantum grading by `f`: level `f` holds the
/// generators with homotopical grading at most `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Filtration {
    pub q: i64,
    pub f_min: i64,
    pub f_max: i64,
    /// `(f, number of generators with that f)`, in steps of two.
    pub levels: Vec<(i64, usize)>,
}

impl Filtration {
    pub fn new(cube: &StateCube, q: i64) -> Result<Self> {
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for i in 0..cube.generator_count() {
            let g = cube.grading(i);
            if g.q == q {
                *counts.entry(g.f).or_default() += 1;
            }
        }
        let (&f_min, _) = counts.iter().next().ok_or(Error::EmptyGrading(q))?;
        let (&f_max, _) = counts.iter().next_back().unwrap();
        let levels = (f_min..=f_max)
            .step_by(2)
            .map(|f| (f, counts.get(&f).copied().unwrap_or(0)))
            .collect();
        Ok(Filtration { q, f_min, f_max, levels })
    }

    /// True when no Khovanov entry leaves any filtration level.
    pub fn is_closed(&self, khovanov: &GradedComplex) -> bool {
        let cube = &khovanov.cube;
        khovanov.differential.entries.iter().all(|&(s, t, _)| {
            let (gs, gt) = (cube.grading(s), cube.grading(t));
            gs.q != self.q || gt.f <= gs.f
        })
    }
}

/// The induced map in one homological degree.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeMap {
    pub h: i64,
    pub source: HomologyGroup,
    pub target: HomologyGroup,
    /// Column `j`: target coordinates of the image of source generator `j`.
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: Vec<Vec<BigInt>>,
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<serde_json::Value>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| match i64::try_from(v) {
                    Ok(x) => serde_json::Value::from(x),
                    Err(_) => serde_json::Value::from(v.to_string()),
                })
                .collect()
        })
        .collect();
    rows.serialize(s)
}

/// The map `H_Sk^{•, q, f_min} → H_Kh^{•, q}` induced by inclusion.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremeMap {
    pub q: i64,
    pub f_min: i64,
    pub ring: Ring,
    pub degrees: Vec<DegreeMap>,
}

/// Homology bases in one degree of both complexes plus the inclusion data.
pub(crate) struct ExtremeDegree {
    pub h: i64,
    pub source: HomologyBasis,
    pub target: HomologyBasis,
    /// Position in the Khovanov group of each generator of the skein group.
    pub embed: Vec<usize>,
    pub target_dim: usize,
}

impl ExtremeDegree {
    /// Image in target coordinates of a skein cycle `z`.
    pub fn push(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        let mut y = vec![BigInt::zero(); self.target_dim];
        for (i, v) in z.iter().enumerate() {
            y[self.embed[i]] = v.clone();
        }
        self.target.coordinates(&y)
    }
}

pub(crate) fn extreme_degrees(pair: &ComplexPair, q: i64, ring: Ring) -> Result<(i64, Vec<ExtremeDegree>)> {
    let fmin = f_min(&pair.skein.cube, q).ok_or(Error::EmptyGrading(q))?;
    let filtration = Filtration::new(&pair.khovanov.cube, q)?;
    if !filtration.is_closed(&pair.khovanov) {
        return Err(Error::FiltrationShift { shift: 2 });
    }
    let src = pair.skein.bucket(q, Some(fmin)).ok_or(Error::EmptyGrading(q))?;
    let dst = pair.khovanov.bucket(q, None).ok_or(Error::EmptyGrading(q))?;
    let degrees = src
        .h_range()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|h| {
            let source = HomologyBasis::new(&src.map(h - 1), &src.map(h), ring)?;
            let target = HomologyBasis::new(&dst.map(h - 1), &dst.map(h), ring)?;
            let position: BTreeMap<usize, usize> = dst.group(h).iter().enumerate().map(|(i, &g)| (g, i)).collect();
            let embed = src.group(h).iter().map(|g| position[g]).collect();
            Ok(ExtremeDegree {
                h,
                source,
                target,
                embed,
                target_dim: dst.group(h).len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((fmin, degrees))
}

/// Matrix of the inclusion-induced map in every degree of the extreme level.
pub fn extreme_inclusion_map(word: &SliceWord, q: i64, ring: Ring) -> Result<ExtremeMap> {
    let pair = ComplexPair::new(word)?;
    extreme_map_of(&pair, q, ring)
}

pub fn extreme_map_of(pair: &ComplexPair, q: i64, ring: Ring) -> Result<ExtremeMap> {
    let (fmin, degrees) = extreme_degrees(pair, q, ring)?;
    let degrees = degrees
        .iter()
        .map(|d| {
            let cols: Vec<Vec<BigInt>> = d
                .source
                .generators
                .iter()
                .map(|g| d.push(&g.representative))
                .collect::<Result<_>>()?;
            let rows = d.target.generators.len();
            let matrix = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            Ok(DegreeMap {
                h: d.h,
                source: d.source.group.clone(),
                target: d.target.group.clone(),
                matrix,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtremeMap {
        q,
        f_min: fmin,
        ring,
        degrees,
    })
}

/// A violation of `dim H_Kh^{h,q} ≤ Σ_f dim H_Sk^{h,q,f}` over `Z2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralViolation {
    pub h: i64,
    pub q: i64,
    pub khovanov: usize,
    pub skein_sum: usize,
}

/// Checks the rank inequality between the skein page and its limit.
pub fn spectral_bound(pair: &ComplexPair) -> Result<Vec<SpectralViolation>> {
    let kh = homology_table(&pair.khovanov, Ring::Mod2)?.collapse_f();
    let sk = homology_table(&pair.skein, Ring::Mod2)?.collapse_f();
    Ok(kh
        .iter()
        .filter_map(|(&(h, q), &k)| {
            let s = sk.get(&(h, q)).copied().unwrap_or(0);
            (k > s).then_some(SpectralViolation {
                h,
                q,
                khovanov: k,
                skein_sum: s,
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::BraidWord;
    use crate::skein::GradingKey;

    fn braid(b: usize, t: &[i64]) -> SliceWord {
        BraidWord::from_tokens(b, t).to_slice_word()
    }

    // Right-handed trefoil: Z at (0,1), (0,3), (2,5), (3,9) and Z/2 at (3,7).
    #[test]
    fn trefoil_khovanov_homology() {
        let t = khovanov_homology(&braid(2, &[1, 1, 1]), Ring::Integers).unwrap();
        let got: Vec<(i64, i64, String)> = t.groups.iter().map(|(k, g)| (k.h, k.q, g.to_string())).collect();
        let want = vec![
            (0, 1, "Z".to_string()),
            (0, 3, "Z".to_string()),
            (2, 5, "Z".to_string()),
            (3, 7, "Z/2".to_string()),
            (3, 9, "Z".to_string()),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn decomposition_of_worked_braid() {
        let d = decompose_differential(&braid(3, &[1, -2])).unwrap();
        assert_eq!(d.report.d0_entries, d.report.skein_entries);
        assert_eq!(d.report.d0_entries + d.report.d_minus2_entries, d.report.khovanov_entries);
    }

    #[test]
    fn unknot_extreme_map_is_identity() {
        let m = extreme_inclusion_map(&braid(1, &[]), -1, Ring::Integers).unwrap();
        assert_eq!(m.f_min, -1);
        assert_eq!(m.degrees.len(), 1);
        assert_eq!(m.degrees[0].matrix, vec![vec![BigInt::from(1)]]);
        assert!(matches!(
            extreme_inclusion_map(&braid(1, &[]), 5, Ring::Integers),
            Err(Error::EmptyGrading(5))
        ));
    }

    #[test]
    fn spectral_bound_holds_on_small_words() {
        for w in [braid(2, &[1, 1, 1]), braid(3, &[1, -2, 1, -2]), braid(3, &[1, 1, 2, -1])] {
            let pair = ComplexPair::new(&w).unwrap();
            assert!(spectral_bound(&pair).unwrap().is_empty());
        }
        let _ = GradingKey { h: 0, q: 0, f: None };
    }
}
