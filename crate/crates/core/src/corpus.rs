//! The built-in diagram corpus: every braid word of length at most 6 on at
//! most 4 strands up to cyclic rotation, plus a few named diagrams.

use std::path::Path;

use itertools::Itertools;
use serde::Serialize;

use crate::diagram::{parse_braid_file, parse_slice_file, BraidWord, SliceWord};
use crate::error::{Error, Result};

/// Environment variable naming a directory of `*.braid` / `*.slice` files to
/// use instead of the built-in corpus.
pub const CORPUS_ENV: &str = "ANNULAR_SKEIN_CORPUS";

pub const MAX_LENGTH: usize = 6;
pub const MAX_STRANDS: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub word: SliceWord,
    /// Present when the diagram is a braid closure.
    pub braid: Option<BraidWord>,
}

impl CorpusEntry {
    pub fn from_braid(name: impl Into<String>, braid: BraidWord) -> Self {
        CorpusEntry {
            name: name.into(),
            word: braid.to_slice_word(),
            braid: Some(braid),
        }
    }

    pub fn from_slices(name: impl Into<String>, word: SliceWord) -> Self {
        let braid = word.as_braid();
        CorpusEntry {
            name: name.into(),
            word,
            braid,
        }
    }
}

/// Braid words on `strands` strands of length exactly `len`, one per
/// rotation class (the least rotation of the token sequence).
pub fn braid_words(strands: usize, len: usize) -> Vec<BraidWord> {
    let letters: Vec<i64> = (1..strands as i64).flat_map(|i| [i, -i]).collect();
    if len == 0 {
        return vec![BraidWord::from_tokens(strands, &[])];
    }
    if letters.is_empty() {
        return Vec::new();
    }
    std::iter::repeat(letters.iter().copied())
        .take(len)
        .multi_cartesian_product()
        .filter(|w| (1..len).all(|k| w[k..].iter().chain(&w[..k]).cmp(w.iter()).is_ge()))
        .map(|w| BraidWord::from_tokens(strands, &w))
        .collect()
}

/// Named diagrams, braids and slice words.
pub fn named() -> Vec<CorpusEntry> {
    let braid = |name: &str, b: usize, t: &[i64]| CorpusEntry::from_braid(name, BraidWord::from_tokens(b, t));
    let slices = |name: &str, text: &str| {
        CorpusEntry::from_slices(name, parse_slice_file(text).expect("built-in slice word parses"))
    };
    vec![
        braid("worked braid", 3, &[1, -2]),
        braid("unknot", 1, &[]),
        braid("trefoil", 2, &[1, 1, 1]),
        braid("figure eight", 3, &[1, -2, 1, -2]),
        braid("Hopf link", 2, &[1, 1]),
        braid("cinquefoil", 2, &[1, 1, 1, 1, 1]),
        slices("planar unknot", "0\nU 1\nA 1\n"),
        slices("planar Hopf link", "0\nU 1\nU 3\nX 2 +\nX 2 +\nA 1\nA 1\nO + -\n"),
        slices("clasped axis circle", "1\nU 2\nX 1 +\nX 1 +\nA 2\n"),
    ]
}

/// The built-in corpus: all braid words up to rotation, then the named slice
/// diagrams that are not braids.
pub fn builtin() -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = (1..=MAX_STRANDS)
        .flat_map(|b| (0..=MAX_LENGTH).flat_map(move |l| braid_words(b, l)))
        .map(|w| CorpusEntry::from_braid(w.to_string(), w))
        .collect();
    out.extend(named().into_iter().filter(|e| e.braid.is_none()));
    out
}

/// Loads every `*.braid` and `*.slice` file of a directory, sorted by name.
pub fn load(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())));
    let paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .sorted()
        .collect();
    let mut out = Vec::new();
    for p in paths {
        let name = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
        match p.extension().and_then(|e| e.to_str()) {
            Some("braid") => out.push(CorpusEntry::from_braid(name, parse_braid_file(&read(&p)?)?)),
            Some("slice") => out.push(CorpusEntry::from_slices(name, parse_slice_file(&read(&p)?)?)),
            _ => {}
        }
    }
    Ok(out)
}

/// The corpus directory named by the environment, or the built-in corpus.
pub fn corpus() -> Result<Vec<CorpusEntry>> {
    match std::env::var_os(CORPUS_ENV) {
        Some(dir) => load(Path::new(&dir)),
        None => Ok(builtin()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_classes() {
        // necklaces of length 2 over {1, -1}: (1 1), (1 -1), (-1 -1)
        assert_eq!(braid_words(2, 2).len(), 3);
        // length 3 over 4 letters: (64 - 4) / 3 + 4
        assert_eq!(braid_words(3, 3).len(), 24);
        assert_eq!(braid_words(1, 3).len(), 0);
    }

    #[test]
    fn named_diagrams_parse() {
        let named = named();
        assert!(named.iter().filter(|e| e.braid.is_none()).count() >= 3);
        assert!(builtin().len() > 10_000);
    }
}
