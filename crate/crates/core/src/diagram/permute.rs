use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SliceWord;
use crate::error::{Error, Result};

/// A reordering of the crossings used by the sign assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossingPermutation {
    Reverse,
    List(Vec<usize>),
    Shuffle(u64),
}

impl CrossingPermutation {
    /// The order for `n` crossings (entry `k` is the slice index of crossing `k`).
    pub fn order(&self, n: usize) -> Vec<usize> {
        match self {
            CrossingPermutation::Reverse => (0..n).rev().collect(),
            CrossingPermutation::List(v) => v.clone(),
            CrossingPermutation::Shuffle(seed) => {
                let mut v: Vec<usize> = (0..n).collect();
                v.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                v
            }
        }
    }

    pub fn apply(&self, word: &SliceWord) -> Result<SliceWord> {
        word.with_crossing_order(&self.order(word.crossings()))
    }
}

impl std::str::FromStr for CrossingPermutation {
    type Err = Error;

    /// `reverse`, `shuffle:SEED` or a comma-separated list such as `2,0,1`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "reverse" {
            return Ok(CrossingPermutation::Reverse);
        }
        if let Some(seed) = s.strip_prefix("shuffle:") {
            return seed
                .parse()
                .map(CrossingPermutation::Shuffle)
                .map_err(|_| Error::CrossingOrder(format!("seed {seed:?} is not an unsigned integer")));
        }
        s.split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(CrossingPermutation::List)
            .map_err(|_| Error::CrossingOrder(format!("{s:?} is not reverse, shuffle:SEED or a list")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_orders() {
        assert_eq!("reverse".parse::<CrossingPermutation>().unwrap().order(3), vec![2, 1, 0]);
        assert_eq!("2, 0,1".parse::<CrossingPermutation>().unwrap().order(3), vec![2, 0, 1]);
        let s: CrossingPermutation = "shuffle:7".parse().unwrap();
        let mut o = s.order(6);
        assert_eq!(o, s.order(6));
        o.sort_unstable();
        assert_eq!(o, (0..6).collect::<Vec<_>>());
        assert!("shuffle:x".parse::<CrossingPermutation>().is_err());
    }
}
