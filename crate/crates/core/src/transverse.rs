//! Transverse data of a closed braid: self-linking number, the oriented
//! resolution, the `ψ` generators, extreme gradings and the maps attached to
//! a positive stabilization.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{ExactMatrix, Ring};
use crate::diagram::{BraidWord, SliceWord, State};
use crate::error::{Error, Result};
use crate::khovanov::{extreme_degrees, ComplexPair};
use crate::skein::{EnhancedState, GradedComplex, GradingTriple, HomologyTable, Label, StateCube};

/// A named yes/no check with a short explanation when it fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: &str, holds: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            holds,
            detail: if holds { String::new() } else { detail.into() },
        }
    }
}

/// Extreme gradings available for any annular diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramExtremes {
    /// `n₊ − 2n₋ − |C(0̄)|`.
    pub j_min_formula: i64,
    /// Smallest quantum grading over all generators.
    pub j_min_enumerated: i64,
    /// Circles of the all-zero resolution.
    pub zero_circles: usize,
    /// `f_min(d)`.
    pub f_min: i64,
    /// `f_min(d, q)` for every populated `q`.
    pub f_min_by_q: BTreeMap<i64, i64>,
}

/// Minimum `f` over nonzero homology, globally and at one quantum grading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologicalMinimum {
    pub ring: Ring,
    pub global: Option<i64>,
    pub at_sl: Option<i64>,
}

/// Everything the transverse layer computes for a closed braid.
#[derive(Debug, Clone, Serialize)]
pub struct TransverseReport {
    pub braid: String,
    pub strands: usize,
    pub sl: i64,
    pub oriented_state: State,
    pub psi_sk: EnhancedState,
    /// Khovanov labels of the same generator.
    pub psi_kh: Vec<&'static str>,
    pub psi_gradings: GradingTriple,
    #[serde(flatten)]
    pub extremes: DiagramExtremes,
    pub f_min_at_sl: Option<i64>,
    pub homological_f_min: Vec<HomologicalMinimum>,
    /// `S_{sl, −b}`.
    pub s_sl_minus_b: Vec<EnhancedState>,
    /// `S_{−b}`.
    pub s_minus_b: Vec<EnhancedState>,
    /// Generators in the bucket `(j_min, −b)`.
    pub extreme_bucket_size: usize,
    pub extreme_bucket_homology: String,
    /// Whether the inclusion of the extreme level sends `[ψ_Sk]` to `±[ψ_Kh]`.
    pub psi_extreme_image: PsiImage,
    pub checks: Vec<Check>,
}

impl TransverseReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Classes of `ψ` in the extreme skein level and in Khovanov homology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiImage {
    pub ring: Ring,
    /// Coordinates of `[ψ_Sk]` in `H_Sk^{0, sl, f_min}`.
    pub skein_class: Vec<String>,
    /// Coordinates of the image of `[ψ_Sk]` in `H_Kh^{0, sl}`.
    pub image: Vec<String>,
    /// Coordinates of `[ψ_Kh]` in `H_Kh^{0, sl}`.
    pub khovanov_class: Vec<String>,
    /// `image = ±khovanov_class`.
    pub agrees_up_to_sign: bool,
}

/// `n₊ − 2n₋ − |C(0̄)|`, the enumerated minimum of `q`, and `f_min`.
pub fn diagram_extremes(cube: &StateCube) -> DiagramExtremes {
    let zero = cube.resolution(State::zero(cube.crossings())).circle_count();
    let j_min_formula = cube.n_plus() as i64 - 2 * cube.n_minus() as i64 - zero as i64;
    let mut f_min_by_q: BTreeMap<i64, i64> = BTreeMap::new();
    for i in 0..cube.generator_count() {
        let g = cube.grading(i);
        let e = f_min_by_q.entry(g.q).or_insert(g.f);
        *e = (*e).min(g.f);
    }
    DiagramExtremes {
        j_min_formula,
        j_min_enumerated: *f_min_by_q.keys().next().expect("every cube has a generator"),
        zero_circles: zero,
        f_min: *f_min_by_q.values().min().unwrap(),
        f_min_by_q,
    }
}

/// Smallest `f` whose skein bucket carries nonzero homology, optionally at a
/// fixed quantum grading.
pub fn homological_f_min(skein: &GradedComplex, q: Option<i64>, ring: Ring) -> Result<Option<i64>> {
    let mut keys: Vec<(i64, i64)> = skein
        .buckets
        .keys()
        .filter_map(|&(bq, f)| Some((f?, bq)))
        .filter(|&(_, bq)| q.is_none_or(|q| q == bq))
        .collect();
    keys.sort_unstable();
    for (f, bq) in keys {
        let b = &skein.buckets[&(bq, Some(f))];
        for h in b.h_range() {
            if !b.homology(h, ring)?.is_zero() {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

/// The oriented resolution `α^o`: bit `i` set exactly at negative crossings.
pub fn oriented_state(word: &SliceWord) -> State {
    let bits: Vec<bool> = word.crossing_signs().iter().map(|s| s.value() < 0).collect();
    State::from_bools(&bits)
}

/// `ψ̂`: every circle of the oriented resolution labelled with a minus.
pub fn psi_generator(cube: &StateCube) -> EnhancedState {
    let state = oriented_state(cube.word());
    let r = cube.resolution(state);
    let labels = r.circles.iter().map(|c| Label::new(c.trivial, false)).collect();
    EnhancedState::new(state, labels)
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn generators_where(cube: &StateCube, keep: impl Fn(GradingTriple) -> bool) -> Vec<usize> {
    (0..cube.generator_count()).filter(|&i| keep(cube.grading(i))).collect()
}

fn fmt_coords(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Pushes `[ψ_Sk]` through the inclusion of the extreme level at `q = sl`.
pub fn psi_extreme_image(pair: &ComplexPair, ring: Ring) -> Result<PsiImage> {
    let cube = &pair.skein.cube;
    let psi = cube.index_of(&psi_generator(cube))?;
    let q = cube.grading(psi).q;
    let (fmin, degrees) = extreme_degrees(pair, q, ring)?;
    let deg = degrees
        .iter()
        .find(|d| d.h == 0)
        .ok_or_else(|| Error::Dimension("extreme level has no degree 0".into()))?;
    let bucket = pair.skein.bucket(q, Some(fmin)).ok_or(Error::EmptyGrading(q))?;
    let pos = bucket
        .group(0)
        .iter()
        .position(|&g| g == psi)
        .ok_or_else(|| Error::Dimension("psi is not in the extreme level".into()))?;
    let mut z = vec![BigInt::zero(); bucket.group(0).len()];
    z[pos] = BigInt::from(1);
    let skein_class = deg.source.coordinates(&z)?;
    let image = deg.push(&z)?;
    let kh_bucket = pair.khovanov.bucket(q, None).ok_or(Error::EmptyGrading(q))?;
    let mut y = vec![BigInt::zero(); deg.target_dim];
    let kpos = kh_bucket.group(0).iter().position(|&g| g == psi).unwrap();
    y[kpos] = BigInt::from(1);
    let khovanov_class = deg.target.coordinates(&y)?;
    let negated: Vec<BigInt> = khovanov_class
        .iter()
        .zip(&deg.target.generators)
        .map(|(c, g)| match (ring, g.order.is_zero()) {
            (Ring::Mod2, _) => c.clone(),
            (_, true) => -c,
            (_, false) => (&g.order - c) % &g.order,
        })
        .collect();
    let agrees = image == khovanov_class || image == negated;
    Ok(PsiImage {
        ring,
        skein_class: fmt_coords(&skein_class),
        image: fmt_coords(&image),
        khovanov_class: fmt_coords(&khovanov_class),
        agrees_up_to_sign: agrees,
    })
}

/// Full transverse report of a closed braid.
pub fn transverse_report(braid: &BraidWord, ring: Ring) -> Result<TransverseReport> {
    let word = braid.to_slice_word();
    let pair = ComplexPair::new(&word)?;
    transverse_report_of(braid, &pair, ring)
}

/// [`transverse_report`] over prebuilt complexes of `braid`.
pub fn transverse_report_of(braid: &BraidWord, pair: &ComplexPair, ring: Ring) -> Result<TransverseReport> {
    let cube = &pair.skein.cube;
    let b = braid.strands() as i64;
    let sl = braid.self_linking();
    let extremes = diagram_extremes(cube);
    let psi = psi_generator(cube);
    let psi_index = cube.index_of(&psi)?;
    let psi_gradings = cube.grading(psi_index);
    let n = cube.generator_count();
    let psi_vec = unit(n, psi_index);
    let sk_cocycle = pair.skein.apply(&psi_vec).iter().all(|&x| x == 0);
    let kh_cocycle = pair.khovanov.apply(&psi_vec).iter().all(|&x| x == 0);
    let f_min_at_sl = extremes.f_min_by_q.get(&sl).copied();

    let homological_f_min = [Ring::Integers, Ring::Mod2]
        .into_iter()
        .map(|r| {
            Ok(HomologicalMinimum {
                ring: r,
                global: homological_f_min(&pair.skein, None, r)?,
                at_sl: homological_f_min(&pair.skein, Some(sl), r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let s_minus_b_idx = generators_where(cube, |g| g.f == -b);
    let s_sl_idx = generators_where(cube, |g| g.f == -b && g.q == sl);
    let s_minus_b: Vec<EnhancedState> = s_minus_b_idx.iter().map(|&i| cube.enhanced(i)).collect();
    let s_sl_minus_b: Vec<EnhancedState> = s_sl_idx.iter().map(|&i| cube.enhanced(i)).collect();

    let j_min = extremes.j_min_formula;
    let (extreme_bucket_size, extreme_h) = match pair.skein.bucket(j_min, Some(-b)) {
        Some(bk) => {
            let size = bk.groups.iter().map(Vec::len).sum();
            let groups = bk
                .h_range()
                .map(|h| Ok((h, bk.homology(h, Ring::Integers)?)))
                .collect::<Result<Vec<_>>>()?;
            (size, groups.into_iter().filter(|(_, g)| !g.is_zero()).collect::<Vec<_>>())
        }
        None => (0, Vec::new()),
    };
    let extreme_bucket_homology = if extreme_h.is_empty() {
        "0".to_string()
    } else {
        extreme_h.iter().map(|(h, g)| format!("h={h}: {g}")).collect::<Vec<_>>().join(", ")
    };
    let extreme_is_z = extreme_h.len() == 1 && extreme_h[0].1.free_rank == 1 && extreme_h[0].1.torsion.is_empty();

    let psi_extreme = psi_extreme_image(pair, ring)?;

    let singleton = |set: &[usize]| set.len() == 1 && set[0] == psi_index;
    let mut checks = vec![
        Check::new(
            "psi gradings are (0, sl, -b)",
            psi_gradings == GradingTriple { h: 0, q: sl, f: -b },
            format!("psi has gradings {psi_gradings}"),
        ),
        Check::new(
            "oriented resolution has b nontrivial circles",
            psi.labels.len() as i64 == b && psi.labels.iter().all(|l| *l == Label::VMinus),
            format!("psi is {psi}"),
        ),
        Check::new("psi is a skein cocycle", sk_cocycle, "nonzero skein differential"),
        Check::new("psi is a Khovanov cocycle", kh_cocycle, "nonzero Khovanov differential"),
        Check::new("f_min equals -b", extremes.f_min == -b, format!("f_min = {}", extremes.f_min)),
        Check::new(
            "f_min at q = sl equals -b",
            f_min_at_sl == Some(-b),
            format!("f_min(sl) = {f_min_at_sl:?}"),
        ),
    ];
    for m in &homological_f_min {
        checks.push(Check::new(
            &format!("homological f_min over {} equals -b", m.ring.name()),
            m.global == Some(-b),
            format!("got {:?}", m.global),
        ));
        checks.push(Check::new(
            &format!("homological f_min at q = sl over {} equals -b", m.ring.name()),
            m.at_sl == Some(-b),
            format!("got {:?}", m.at_sl),
        ));
    }
    checks.extend([
        Check::new(
            "S_-b is exactly psi",
            singleton(&s_minus_b_idx),
            format!("{} generators", s_minus_b_idx.len()),
        ),
        Check::new(
            "S_sl,-b is exactly psi",
            singleton(&s_sl_idx),
            format!("{} generators", s_sl_idx.len()),
        ),
        Check::new(
            "j_min formula matches the enumerated minimum",
            extremes.j_min_formula == extremes.j_min_enumerated,
            format!("formula {} vs enumerated {}", extremes.j_min_formula, extremes.j_min_enumerated),
        ),
        Check::new("j_min equals sl", j_min == sl, format!("j_min = {j_min}, sl = {sl}")),
        Check::new(
            "psi lies in the minimal quantum grading",
            psi_gradings.q == extremes.j_min_enumerated,
            format!("psi at q = {}, minimum {}", psi_gradings.q, extremes.j_min_enumerated),
        ),
        Check::new(
            "extreme bucket (j_min, -b) is one generator with homology Z",
            extreme_bucket_size == 1 && extreme_is_z,
            format!("{extreme_bucket_size} generators, homology {extreme_bucket_homology}"),
        ),
        Check::new(
            "extreme inclusion sends psi_Sk to +-psi_Kh",
            psi_extreme.agrees_up_to_sign,
            format!("image {:?} vs {:?}", psi_extreme.image, psi_extreme.khovanov_class),
        ),
    ]);

    Ok(TransverseReport {
        braid: braid.to_string(),
        strands: braid.strands(),
        sl,
        oriented_state: psi.state,
        psi_kh: psi.labels.iter().map(|l| l.khovanov()).collect(),
        psi_sk: psi,
        psi_gradings,
        extremes,
        f_min_at_sl,
        homological_f_min,
        s_sl_minus_b,
        s_minus_b,
        extreme_bucket_size,
        extreme_bucket_homology,
        psi_extreme_image: psi_extreme,
        checks,
    })
}

/// Which pair of stabilization maps to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum StabilizationVariant {
    /// `x ↦ x ⊗ v₋` on minus labels, zero on plus labels; `x ⊗ v₋ ↦ x`.
    #[default]
    Plain,
    /// `v₊ ↦ v₊⊗v₋ − v₋⊗v₊`, `v₋ ↦ v₋⊗v₋`, `w₊ ↦ 0`, `w₋ ↦ w₋⊗v₋`, with the
    /// matching destabilization.
    Alternative,
}

/// The maps `φ_s: C(d) → C(d′)` and `φ_d: C(d′) → C(d)` for `d′` the positive
/// stabilization of `d` on the outermost strand.
#[derive(Debug, Clone)]
pub struct Stabilization {
    pub variant: StabilizationVariant,
    pub small: GradedComplex,
    pub large: GradedComplex,
    /// `gens(d′) × gens(d)`.
    pub phi_s: ExactMatrix,
    /// `gens(d) × gens(d′)`.
    pub phi_d: ExactMatrix,
}

/// Verification summary for one stabilization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub braid: String,
    pub stabilized: String,
    pub variant: StabilizationVariant,
    /// Observed `(Δh, Δq, Δf)` over the nonzero entries of `φ_s`.
    pub phi_s_shifts: BTreeSet<(i64, i64, i64)>,
    pub checks: Vec<Check>,
}

impl StabilizationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Builds both maps after checking that `large` stabilizes `small`.
pub fn stabilization_between(small: &BraidWord, large: &BraidWord, variant: StabilizationVariant) -> Result<Stabilization> {
    if &small.stabilize() != large {
        return Err(Error::NotStabilization(format!(
            "{large} is not {small} with strand {} and letter {} appended",
            small.strands() + 1,
            small.strands()
        )));
    }
    stabilize_map(small, variant)
}

/// `φ_s` and `φ_d` for `d` and its positive stabilization.
pub fn stabilize_map(d: &BraidWord, variant: StabilizationVariant) -> Result<Stabilization> {
    let d2 = d.stabilize();
    let small = crate::skein::build_skein_complex(&d.to_slice_word())?;
    let large = crate::skein::build_skein_complex(&d2.to_slice_word())?;
    let (phi_s, phi_d) = stabilization_matrices(&small.cube, &large.cube, d.strands(), variant);
    Ok(Stabilization {
        variant,
        small,
        large,
        phi_s,
        phi_d,
    })
}

/// Destabilization alone.
pub fn destabilize_map(d: &BraidWord, variant: StabilizationVariant) -> Result<ExactMatrix> {
    Ok(stabilize_map(d, variant)?.phi_d)
}

fn stabilization_matrices(
    small: &StateCube,
    large: &StateCube,
    b: usize,
    variant: StabilizationVariant,
) -> (ExactMatrix, ExactMatrix) {
    let n = small.crossings();
    let mut s_entries: Vec<(usize, usize, i64)> = Vec::new();
    let mut d_entries: Vec<(usize, usize, i64)> = Vec::new();
    for bits in 0..1u32 << n {
        let st = State::new(bits, n);
        let st2 = State::new(bits, n + 1);
        let r = small.resolution(st);
        let r2 = large.resolution(st2);
        // Edge (level t, position p) sits at t·b + p in d and t·(b+1) + p in d′.
        let carry: Vec<usize> = r
            .circles
            .iter()
            .map(|c| {
                let e = c.first_edge;
                r2.edge_circle[(e / b) * (b + 1) + e % b] as usize
            })
            .collect();
        let u = r2.edge_circle[b] as usize;
        let p = r.edge_circle[b - 1] as usize;
        let lift = |plus: u32| -> u32 {
            (0..r.circles.len())
                .filter(|&i| plus >> i & 1 == 1)
                .fold(0, |m, i| m | 1 << carry[i])
        };
        let p_trivial = r.circles[p].trivial;
        for plus in 0..1u32 << r.circles.len() {
            let src = small.index(st, plus);
            let base = lift(plus & !(1 << p));
            let p_plus = plus >> p & 1 == 1;
            let pp = 1u32 << carry[p];
            let uu = 1u32 << u;
            let images: Vec<(u32, i64)> = match (variant, p_plus, p_trivial) {
                (_, false, _) => vec![(base, 1)],
                (StabilizationVariant::Plain, true, _) => vec![],
                (StabilizationVariant::Alternative, true, true) => vec![],
                (StabilizationVariant::Alternative, true, false) => vec![(base | pp, 1), (base | uu, -1)],
            };
            for (mask, c) in images {
                s_entries.push((large.index(st2, mask), src, c));
            }
            // Destabilization from (α0, lifted labels ⊔ U).
            d_entries.push((src, large.index(st2, lift(plus)), 1));
            if variant == StabilizationVariant::Alternative && !p_plus && !p_trivial {
                // v₋ ⊗ v₊ ↦ v₊
                d_entries.push((small.index(st, plus | 1 << p), large.index(st2, lift(plus) | uu), 1));
            }
        }
    }
    let (g, g2) = (small.generator_count(), large.generator_count());
    (
        ExactMatrix::from_triplets(g2, g, s_entries),
        ExactMatrix::from_triplets(g, g2, d_entries),
    )
}

fn describe_column(m: &ExactMatrix, col: usize, cube: &StateCube) -> String {
    let terms: Vec<String> = m
        .entries()
        .filter(|(_, c, v)| *c == col && !v.is_zero())
        .map(|(r, _, v)| format!("{v}·{}", cube.enhanced(r)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl Stabilization {
    /// Checks the chain-map identities, the grading shift, `φ_s(ψ̂) = ψ̂′` and
    /// `φ_d φ_s = id` on the extreme bucket of `d`.
    pub fn report(&self) -> Result<StabilizationReport> {
        let (sc, lc) = (&self.small.cube, &self.large.cube);
        let d_small = self.small.differential.matrix(sc.generator_count());
        let d_large = self.large.differential.matrix(lc.generator_count());
        let mut checks = Vec::new();

        for (name, src_cube, dst_cube, lhs, rhs) in [
            ("phi_s is a chain map", sc, lc, d_large.mul(&self.phi_s), self.phi_s.mul(&d_small)),
            ("phi_d is a chain map", lc, sc, d_small.mul(&self.phi_d), self.phi_d.mul(&d_large)),
        ] {
            let diff = lhs.add(&rhs.neg());
            let detail = match diff.entries().find(|(_, _, v)| !v.is_zero()) {
                None => String::new(),
                Some((_, col, _)) => {
                    format!(
                        "at {}: d∘phi = {}, phi∘d = {} ({} differing entries)",
                        src_cube.enhanced(col),
                        describe_column(&lhs, col, dst_cube),
                        describe_column(&rhs, col, dst_cube),
                        diff.nnz()
                    )
                }
            };
            checks.push(Check::new(name, diff.is_zero(), detail));
        }

        let mut shifts = BTreeSet::new();
        for (r, c, v) in self.phi_s.entries() {
            if !v.is_zero() {
                let (a, b) = (sc.grading(c), lc.grading(r));
                shifts.insert((b.h - a.h, b.q - a.q, b.f - a.f));
            }
        }
        checks.push(Check::new(
            "phi_s preserves h and q and lowers f by one",
            shifts.iter().all(|&s| s == (0, 0, -1)),
            format!("observed shifts {shifts:?}"),
        ));

        let psi = sc.index_of(&psi_generator(sc))?;
        let psi2 = lc.index_of(&psi_generator(lc))?;
        let image = self.phi_s.column(psi);
        let expected: Vec<BigInt> = (0..lc.generator_count()).map(|i| BigInt::from((i == psi2) as u8)).collect();
        checks.push(Check::new(
            "phi_s sends psi to psi'",
            image == expected,
            format!("phi_s(psi) = {}", describe_column(&self.phi_s, psi, lc)),
        ));
        let back = self.phi_d.column(psi2);
        let psi_vec: Vec<BigInt> = (0..sc.generator_count()).map(|i| BigInt::from((i == psi) as u8)).collect();
        checks.push(Check::new(
            "phi_d sends psi' to psi",
            back == psi_vec,
            format!("phi_d(psi') = {}", describe_column(&self.phi_d, psi2, sc)),
        ));

        let g = sc.grading(psi);
        let round = self.phi_d.mul(&self.phi_s);
        let bucket: Vec<usize> = (0..sc.generator_count())
            .filter(|&i| {
                let x = sc.grading(i);
                x.q == g.q && x.f == g.f
            })
            .collect();
        let one = BigInt::from(1);
        let bad = bucket.iter().find(|&&i| {
            let col = round.column(i);
            col.iter().enumerate().any(|(r, v)| if r == i { *v != one } else { !v.is_zero() })
        });
        checks.push(Check::new(
            "phi_d phi_s is the identity on the extreme bucket",
            bad.is_none(),
            bad.map(|&i| format!("fails at {}", sc.enhanced(i))).unwrap_or_default(),
        ));

        let d = self.small.cube.word().as_braid().ok_or(Error::NotBraid)?;
        Ok(StabilizationReport {
            braid: d.to_string(),
            stabilized: d.stabilize().to_string(),
            variant: self.variant,
            phi_s_shifts: shifts,
            checks,
        })
    }
}

/// `φ_s`/`φ_d` verification for `d` and its positive stabilization.
pub fn check_stabilization(d: &BraidWord, variant: StabilizationVariant) -> Result<StabilizationReport> {
    stabilize_map(d, variant)?.report()
}

/// The first grading where two homology tables disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableDifference {
    pub h: i64,
    pub q: i64,
    pub f: Option<i64>,
    pub left: String,
    pub right: String,
}

/// First differing grading of two tables, if any.
pub fn table_difference(a: &HomologyTable, b: &HomologyTable) -> Option<TableDifference> {
    let keys: BTreeSet<_> = a.groups.keys().chain(b.groups.keys()).copied().collect();
    keys.into_iter().find_map(|k| {
        let (x, y) = (a.get(k.h, k.q, k.f), b.get(k.h, k.q, k.f));
        (x != y).then(|| TableDifference {
            h: k.h,
            q: k.q,
            f: k.f,
            left: x.to_string(),
            right: y.to_string(),
        })
    })
}

/// Verdict of comparing two braids expected to close to the same transverse link.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationVerdict {
    pub left: String,
    pub right: String,
    pub ring: Ring,
    pub tables_equal: bool,
    pub psi_gradings_equal: bool,
    pub difference: Option<TableDifference>,
}

impl ConjugationVerdict {
    pub fn holds(&self) -> bool {
        self.tables_equal && self.psi_gradings_equal
    }
}

/// Compares skein homology tables and `ψ` gradings of two braids. The class
/// correspondence is checked at the level of gradings and ranks.
pub fn conjugation_check(w: &BraidWord, w2: &BraidWord, ring: Ring) -> Result<ConjugationVerdict> {
    let (x, y) = rayon::join(
        || crate::skein::skein_homology(&w.to_slice_word(), ring),
        || crate::skein::skein_homology(&w2.to_slice_word(), ring),
    );
    let (x, y) = (x?, y?);
    let difference = table_difference(&x, &y);
    let psi_grading = |b: &BraidWord| (b.self_linking(), -(b.strands() as i64));
    Ok(ConjugationVerdict {
        left: w.to_string(),
        right: w2.to_string(),
        ring,
        tables_equal: difference.is_none(),
        psi_gradings_equal: psi_grading(w) == psi_grading(w2),
        difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn braid(b: usize, t: &[i64]) -> BraidWord {
        BraidWord::from_tokens(b, t)
    }

    #[test]
    fn worked_braid_report() {
        let r = transverse_report(&braid(3, &[1, -2]), Ring::Integers).unwrap();
        assert_eq!(r.sl, -3);
        assert_eq!(r.oriented_state.to_string(), "01");
        assert_eq!(r.psi_sk.to_string(), "(01, v-⊗v-⊗v-)");
        assert_eq!(r.psi_gradings, GradingTriple { h: 0, q: -3, f: -3 });
        assert_eq!(r.extremes.f_min, -3);
        assert_eq!(r.s_sl_minus_b.len(), 1);
        assert!(r.psi_extreme_image.agrees_up_to_sign);
        assert!(r.all_hold(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn trefoil_and_unknot() {
        let t = transverse_report(&braid(2, &[1, 1, 1]), Ring::Integers).unwrap();
        assert_eq!(t.sl, 1);
        assert_eq!(t.extremes.zero_circles, 2);
        assert_eq!(t.extremes.j_min_formula, 1);
        assert!(t.all_hold());
        let u = transverse_report(&braid(1, &[]), Ring::Mod2).unwrap();
        assert_eq!(u.sl, -1);
        assert_eq!(u.psi_sk.to_string(), "(, v-)");
        assert_eq!(u.extremes.f_min, -1);
    }

    #[test]
    fn negative_crossings_push_j_min_below_sl() {
        // σ₁⁻² on two strands: |C(0̄)| = 2, so j_min = 0 − 4 − 2 = −6 while sl = −4.
        let r = transverse_report(&braid(2, &[-1, -1]), Ring::Integers).unwrap();
        assert_eq!(r.extremes.j_min_formula, -6);
        assert_eq!(r.extremes.j_min_enumerated, -6);
        assert_eq!(r.sl, -4);
        let failed: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"j_min equals sl"));
    }

    #[test]
    fn stabilizing_the_unknot_gives_chain_maps() {
        let rep = check_stabilization(&braid(1, &[]), StabilizationVariant::Plain).unwrap();
        assert!(rep.all_hold(), "{:?}", rep.checks);
        assert_eq!(rep.phi_s_shifts, BTreeSet::from([(0, 0, -1)]));
    }

    #[test]
    fn worked_braid_stabilization_sends_psi_to_psi() {
        let s = stabilize_map(&braid(3, &[1, -2]), StabilizationVariant::Plain).unwrap();
        let rep = s.report().unwrap();
        let get = |n: &str| rep.checks.iter().find(|c| c.name == n).unwrap().holds;
        assert!(get("phi_s sends psi to psi'"));
        assert!(get("phi_d phi_s is the identity on the extreme bucket"));
        assert!(get("phi_d is a chain map"));
        let lc = &s.large.cube;
        let psi2 = psi_generator(lc);
        assert_eq!(psi2.to_string(), "(010, v-⊗v-⊗v-⊗v-)");
    }

    #[test]
    fn phi_s_fails_to_commute_on_a_merge_with_the_new_strand() {
        // d = σ₁ on 2 strands, g = (0, v₋ on the inner strand circle, v₊ on P).
        let rep = check_stabilization(&braid(2, &[1]), StabilizationVariant::Plain).unwrap();
        let c = rep.checks.iter().find(|c| c.name == "phi_s is a chain map").unwrap();
        assert!(!c.holds);
    }

    #[test]
    fn stabilization_precondition() {
        let d = braid(2, &[1]);
        assert!(stabilization_between(&d, &braid(3, &[1, 2]), StabilizationVariant::Plain).is_ok());
        assert!(matches!(
            stabilization_between(&d, &braid(3, &[1, -2]), StabilizationVariant::Plain),
            Err(Error::NotStabilization(_))
        ));
    }

    #[test]
    fn conjugates_and_controls() {
        let a = braid(3, &[1, -2]);
        let v = conjugation_check(&a, &a.rotate(1), Ring::Integers).unwrap();
        assert!(v.holds());
        let r2 = a.insert_cancelling_pair(1, crate::diagram::BraidLetter::new(1, crate::diagram::Sign::Positive)).unwrap();
        assert!(conjugation_check(&a, &r2, Ring::Integers).unwrap().holds());
        let other = braid(3, &[1, 2]);
        assert!(!conjugation_check(&a, &other, Ring::Integers).unwrap().holds());
    }
}
