use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use super::cube::{Differential, StateCube};
use super::rules::Theory;
use crate::algebra::{homology, torsion_json, ExactMatrix, HomologyGroup, Ring};
use crate::diagram::SliceWord;
use crate::error::{Error, Result};

/// A grading position. Khovanov gradings carry no `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradingKey {
    pub h: i64,
    pub q: i64,
    pub f: Option<i64>,
}

impl Serialize for GradingKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("h", &self.h)?;
        m.serialize_entry("q", &self.q)?;
        if let Some(f) = self.f {
            m.serialize_entry("f", &f)?;
        }
        m.end()
    }
}

/// One block of the complex: all generators of a fixed `(q, f)` (or fixed `q`
/// for the Khovanov complex), split by homological degree.
#[derive(Debug, Clone)]
pub struct Bucket {
    pub q: i64,
    pub f: Option<i64>,
    pub h_min: i64,
    /// Global generator indices in each degree `h_min + k`.
    pub groups: Vec<Vec<usize>>,
    /// `maps[k]`: degree `h_min + k` to `h_min + k + 1`.
    pub maps: Vec<ExactMatrix>,
}

impl Bucket {
    pub fn h_range(&self) -> std::ops::Range<i64> {
        self.h_min..self.h_min + self.groups.len() as i64
    }

    pub fn group(&self, h: i64) -> &[usize] {
        let k = h - self.h_min;
        if k < 0 || k as usize >= self.groups.len() {
            return &[];
        }
        &self.groups[k as usize]
    }

    /// Differential out of degree `h`, shaped `dim(h+1) × dim(h)`.
    pub fn map(&self, h: i64) -> ExactMatrix {
        let k = h - self.h_min;
        if k >= 0 && (k as usize) < self.maps.len() {
            return self.maps[k as usize].clone();
        }
        ExactMatrix::zeros(self.group(h + 1).len(), self.group(h).len())
    }

    /// Homology at degree `h`.
    pub fn homology(&self, h: i64, ring: Ring) -> Result<HomologyGroup> {
        homology(&self.map(h - 1), &self.map(h), ring)
    }
}

/// A cochain complex split into independent grading blocks.
#[derive(Debug, Clone)]
pub struct GradedComplex {
    pub theory: Theory,
    pub cube: StateCube,
    pub differential: Differential,
    pub buckets: BTreeMap<(i64, Option<i64>), Bucket>,
}

impl GradedComplex {
    pub fn bucket(&self, q: i64, f: Option<i64>) -> Option<&Bucket> {
        self.buckets.get(&(q, f))
    }

    pub fn generator_count(&self) -> usize {
        self.cube.generator_count()
    }

    /// `∂ x` for a vector over the global generators.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; x.len()];
        for &(s, t, c) in &self.differential.entries {
            if x[s] != 0 {
                out[t] += c * x[s];
            }
        }
        out
    }

    pub fn homology_table(&self, ring: Ring) -> Result<HomologyTable> {
        homology_table(self, ring)
    }
}

fn bucket_key(theory: Theory, q: i64, f: i64) -> (i64, Option<i64>) {
    match theory {
        Theory::Skein => (q, Some(f)),
        Theory::Khovanov => (q, None),
    }
}

/// Builds the complex of the given theory, asserting that the differential
/// raises `h` by one, keeps the block, and squares to zero.
pub fn build_complex(cube: StateCube, theory: Theory) -> Result<GradedComplex> {
    let total = cube.generator_count();
    let gradings: Vec<_> = (0..total).into_par_iter().map(|i| cube.grading(i)).collect();
    let mut buckets: BTreeMap<(i64, Option<i64>), Bucket> = BTreeMap::new();
    let mut local = vec![(0usize, 0usize); total];
    let mut members: BTreeMap<(i64, Option<i64>), Vec<usize>> = BTreeMap::new();
    for (i, g) in gradings.iter().enumerate() {
        members.entry(bucket_key(theory, g.q, g.f)).or_default().push(i);
    }
    for (key, gens) in members {
        let h_min = gens.iter().map(|&i| gradings[i].h).min().unwrap();
        let h_max = gens.iter().map(|&i| gradings[i].h).max().unwrap();
        let mut groups = vec![Vec::new(); (h_max - h_min + 1) as usize];
        for i in gens {
            let k = (gradings[i].h - h_min) as usize;
            local[i] = (k, groups[k].len());
            groups[k].push(i);
        }
        buckets.insert(
            key,
            Bucket {
                q: key.0,
                f: key.1,
                h_min,
                groups,
                maps: Vec::new(),
            },
        );
    }
    let differential = cube.differential(theory);
    let mut triplets: BTreeMap<(i64, Option<i64>), Vec<Vec<(usize, usize, i64)>>> = BTreeMap::new();
    for &(s, t, c) in &differential.entries {
        let (gs, gt) = (gradings[s], gradings[t]);
        if gt.h != gs.h + 1 || gt.q != gs.q {
            return Err(Error::NonzeroComposition(format!(
                "entry {s}->{t} moves (h,q) from ({},{}) to ({},{})",
                gs.h, gs.q, gt.h, gt.q
            )));
        }
        if theory == Theory::Skein && gt.f != gs.f {
            return Err(Error::FiltrationShift { shift: gt.f - gs.f });
        }
        let key = bucket_key(theory, gs.q, gs.f);
        let b = &buckets[&key];
        let slots = triplets
            .entry(key)
            .or_insert_with(|| vec![Vec::new(); b.groups.len().saturating_sub(1)]);
        let (k, col) = local[s];
        let (_, row) = local[t];
        slots[k].push((row, col, c));
    }
    for (key, b) in buckets.iter_mut() {
        let mut slots = triplets.remove(key).unwrap_or_default();
        slots.resize(b.groups.len().saturating_sub(1), Vec::new());
        b.maps = slots
            .into_iter()
            .enumerate()
            .map(|(k, t)| ExactMatrix::from_triplets(b.groups[k + 1].len(), b.groups[k].len(), t))
            .collect();
    }
    buckets.par_iter().try_for_each(|(key, b)| {
        for k in 1..b.maps.len() {
            let comp = b.maps[k].mul(&b.maps[k - 1]);
            if !comp.is_zero() {
                return Err(Error::NonzeroComposition(format!(
                    "{:?} differential squared at q={}, f={:?}, h={}",
                    theory,
                    key.0,
                    key.1,
                    b.h_min + k as i64 - 1
                )));
            }
        }
        Ok(())
    })?;
    Ok(GradedComplex {
        theory,
        cube,
        differential,
        buckets,
    })
}

/// The skein complex of a diagram, with `∂² = 0` checked in every block.
pub fn build_skein_complex(word: &SliceWord) -> Result<GradedComplex> {
    build_complex(StateCube::new(word)?, Theory::Skein)
}

/// Nonzero homology groups keyed by grading.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologyTable {
    pub ring: Ring,
    pub groups: BTreeMap<GradingKey, HomologyGroup>,
}

impl HomologyTable {
    pub fn get(&self, h: i64, q: i64, f: Option<i64>) -> HomologyGroup {
        self.groups.get(&GradingKey { h, q, f }).cloned().unwrap_or_default()
    }

    /// Total rank: free ranks plus the number of invariant factors.
    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.free_rank + g.torsion.len()).sum()
    }

    /// Sum over `f` of the group ranks at each `(h, q)`.
    pub fn collapse_f(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (k, g) in &self.groups {
            *out.entry((k.h, k.q)).or_insert(0) += g.free_rank + g.torsion.len();
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let has_f = self.groups.keys().any(|k| k.f.is_some());
        let mut out = String::from(if has_f { "h,q,f,free_rank,torsion\n" } else { "h,q,free_rank,torsion\n" });
        for (k, g) in &self.groups {
            let torsion: Vec<String> = g.torsion.iter().map(|t| t.to_string()).collect();
            match k.f {
                Some(f) => out.push_str(&format!("{},{},{},{},{}\n", k.h, k.q, f, g.free_rank, torsion.join(" "))),
                None => out.push_str(&format!("{},{},{},{}\n", k.h, k.q, g.free_rank, torsion.join(" "))),
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("ring {}\n", self.ring.name());
        for (k, g) in &self.groups {
            match k.f {
                Some(f) => out.push_str(&format!("h={:>3} q={:>4} f={:>3}  {}\n", k.h, k.q, f, g)),
                None => out.push_str(&format!("h={:>3} q={:>4}  {}\n", k.h, k.q, g)),
            }
        }
        out
    }
}

struct Row<'a>(&'a GradingKey, &'a HomologyGroup);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Row", 5)?;
        st.serialize_field("h", &self.0.h)?;
        st.serialize_field("q", &self.0.q)?;
        if let Some(f) = self.0.f {
            st.serialize_field("f", &f)?;
        } else {
            st.skip_field("f")?;
        }
        st.serialize_field("free_rank", &self.1.free_rank)?;
        st.serialize_field("torsion", &torsion_json(&self.1.torsion))?;
        st.end()
    }
}

impl Serialize for HomologyTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Row> = self.groups.iter().map(|(k, g)| Row(k, g)).collect();
        let mut st = s.serialize_struct("HomologyTable", 2)?;
        st.serialize_field("ring", self.ring.name())?;
        st.serialize_field("gradings", &rows)?;
        st.end()
    }
}

/// Homology of every block and degree; zero groups are omitted.
pub fn homology_table(c: &GradedComplex, ring: Ring) -> Result<HomologyTable> {
    let rows: Vec<Vec<(GradingKey, HomologyGroup)>> = c
        .buckets
        .par_iter()
        .map(|(_, b)| {
            b.h_range()
                .map(|h| Ok((GradingKey { h, q: b.q, f: b.f }, b.homology(h, ring)?)))
                .filter(|r| r.as_ref().map_or(true, |(_, g)| !g.is_zero()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(HomologyTable {
        ring,
        groups: rows.into_iter().flatten().collect(),
    })
}

/// Tri-graded skein homology of a diagram.
pub fn skein_homology(word: &SliceWord, ring: Ring) -> Result<HomologyTable> {
    homology_table(&build_skein_complex(word)?, ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::BraidWord;

    fn braid(b: usize, t: &[i64]) -> SliceWord {
        BraidWord::from_tokens(b, t).to_slice_word()
    }

    #[test]
    fn unknot_has_two_single_generator_buckets() {
        let c = build_skein_complex(&braid(1, &[])).unwrap();
        let keys: Vec<_> = c.buckets.keys().copied().collect();
        assert_eq!(keys, vec![(-1, Some(-1)), (1, Some(1))]);
        assert!(c.differential.entries.is_empty());
        let t = homology_table(&c, Ring::Integers).unwrap();
        assert_eq!(t.groups.len(), 2);
        assert_eq!(t.get(0, -1, Some(-1)), HomologyGroup::free(1));
        assert_eq!(t.get(0, 1, Some(1)), HomologyGroup::free(1));
    }

    #[test]
    fn worked_braid_generator_total() {
        let c = build_skein_complex(&braid(3, &[1, -2])).unwrap();
        // 2^2 + 2^3 + 2^1 + 2^2
        assert_eq!(c.generator_count(), 18);
        let b = c.bucket(-3, Some(-3)).unwrap();
        assert_eq!(b.groups.iter().map(Vec::len).sum::<usize>(), 1);
        assert_eq!(b.homology(0, Ring::Integers).unwrap(), HomologyGroup::free(1));
    }

    #[test]
    fn trefoil_squares_to_zero() {
        assert!(build_skein_complex(&braid(2, &[1, 1, 1])).is_ok());
        assert!(build_complex(StateCube::new(&braid(2, &[1, 1, 1])).unwrap(), Theory::Khovanov).is_ok());
    }
}
