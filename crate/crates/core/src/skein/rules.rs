//! Local rules of the differentials, phrased on sign bits (`true` = plus).
//! The surgery case carries the geometry, so the rules only see signs.

use crate::diagram::SurgeryCase;

/// Which differential a rule belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theory {
    /// Annular skein differential: only the moves that keep the f-grading.
    Skein,
    /// Ordinary Khovanov differential: the Frobenius rules, ignoring the annulus.
    Khovanov,
}

/// Output sign of a merge, or `None` when the coefficient vanishes.
/// `a_trivial` tells which input is the trivial one in the mixed case.
pub fn merge_rule(theory: Theory, case: SurgeryCase, a: bool, b: bool, a_trivial: bool) -> Option<bool> {
    match theory {
        Theory::Khovanov => match (a, b) {
            (true, true) => Some(true),
            (false, false) => None,
            _ => Some(false),
        },
        Theory::Skein => match case {
            SurgeryCase::MergeTrivial => match (a, b) {
                (true, true) => Some(true),
                (false, false) => None,
                _ => Some(false),
            },
            SurgeryCase::MergeMixed => {
                let (trivial, other) = if a_trivial { (a, b) } else { (b, a) };
                trivial.then_some(other)
            }
            SurgeryCase::MergeNontrivial => (a != b).then_some(false),
            _ => unreachable!("merge rule called for {case:?}"),
        },
    }
}

const PLUS_SPLIT: &[(bool, bool)] = &[(true, false), (false, true)];
const MINUS_SPLIT: &[(bool, bool)] = &[(false, false)];

/// Output sign pairs of a split, in canonical order of the two new circles.
/// `first_trivial` tells which output is trivial in the mixed case.
pub fn split_rule(theory: Theory, case: SurgeryCase, input: bool, first_trivial: bool) -> &'static [(bool, bool)] {
    match theory {
        Theory::Khovanov => {
            if input {
                PLUS_SPLIT
            } else {
                MINUS_SPLIT
            }
        }
        Theory::Skein => match case {
            SurgeryCase::SplitTrivial => {
                if input {
                    PLUS_SPLIT
                } else {
                    MINUS_SPLIT
                }
            }
            SurgeryCase::SplitMixed => match (first_trivial, input) {
                (true, true) => &[(false, true)],
                (true, false) => &[(false, false)],
                (false, true) => &[(true, false)],
                (false, false) => &[(false, false)],
            },
            SurgeryCase::SplitNontrivial => {
                if input {
                    PLUS_SPLIT
                } else {
                    &[]
                }
            }
            _ => unreachable!("split rule called for {case:?}"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SurgeryCase::*;

    #[test]
    fn skein_merges() {
        assert_eq!(merge_rule(Theory::Skein, MergeTrivial, true, true, true), Some(true));
        assert_eq!(merge_rule(Theory::Skein, MergeTrivial, false, true, true), Some(false));
        assert_eq!(merge_rule(Theory::Skein, MergeTrivial, false, false, true), None);
        // w₊ v± → v±, w₋ v± → 0
        assert_eq!(merge_rule(Theory::Skein, MergeMixed, true, false, true), Some(false));
        assert_eq!(merge_rule(Theory::Skein, MergeMixed, false, true, false), Some(false));
        assert_eq!(merge_rule(Theory::Skein, MergeMixed, true, true, false), Some(true));
        assert_eq!(merge_rule(Theory::Skein, MergeMixed, false, true, true), None);
        // v₊ v₋ → w₋, equal signs vanish
        assert_eq!(merge_rule(Theory::Skein, MergeNontrivial, true, false, false), Some(false));
        assert_eq!(merge_rule(Theory::Skein, MergeNontrivial, false, false, false), None);
        assert_eq!(merge_rule(Theory::Skein, MergeNontrivial, true, true, false), None);
    }

    #[test]
    fn skein_splits() {
        assert_eq!(split_rule(Theory::Skein, SplitTrivial, true, true), PLUS_SPLIT);
        assert_eq!(split_rule(Theory::Skein, SplitTrivial, false, true), MINUS_SPLIT);
        assert_eq!(split_rule(Theory::Skein, SplitMixed, true, true), &[(false, true)]);
        assert_eq!(split_rule(Theory::Skein, SplitMixed, true, false), &[(true, false)]);
        assert_eq!(split_rule(Theory::Skein, SplitNontrivial, true, false), PLUS_SPLIT);
        assert!(split_rule(Theory::Skein, SplitNontrivial, false, false).is_empty());
    }

    #[test]
    fn khovanov_ignores_geometry() {
        for case in [MergeTrivial, MergeMixed, MergeNontrivial] {
            assert_eq!(merge_rule(Theory::Khovanov, case, false, false, true), None);
            assert_eq!(merge_rule(Theory::Khovanov, case, true, false, true), Some(false));
        }
        for case in [SplitTrivial, SplitMixed, SplitNontrivial] {
            assert_eq!(split_rule(Theory::Khovanov, case, false, true), MINUS_SPLIT);
        }
    }
}
