use annular_skein::algebra::Ring;
use annular_skein::diagram::{BraidLetter, BraidWord, CrossingPermutation, Sign};
use annular_skein::khovanov::{decompose, khovanov_homology, spectral_bound, ComplexPair};
use annular_skein::moduli::harvest_configs;
use annular_skein::skein::{skein_homology, StateCube, Theory};
use annular_skein::transverse::{conjugation_check, diagram_extremes, table_difference};
use proptest::prelude::*;

fn braid(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands).prop_flat_map(move |b| {
        let b_letter = (1..b as i64, any::<bool>()).prop_map(|(i, neg)| if neg { -i } else { i });
        prop::collection::vec(b_letter, 0..=max_len).prop_map(move |t| BraidWord::from_tokens(b, &t))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn differentials_square_to_zero(b in braid(4, 5)) {
        let cube = StateCube::new(&b.to_slice_word()).unwrap();
        let n = cube.generator_count();
        for theory in [Theory::Skein, Theory::Khovanov] {
            let d = cube.differential(theory).matrix(n);
            prop_assert!(d.mul(&d).is_zero(), "{theory:?}");
        }
    }

    #[test]
    fn differentials_respect_gradings(b in braid(4, 5)) {
        let cube = StateCube::new(&b.to_slice_word()).unwrap();
        for (s, t, c) in cube.differential(Theory::Skein).entries {
            let (gs, gt) = (cube.grading(s), cube.grading(t));
            prop_assert!(c == 1 || c == -1);
            prop_assert_eq!((gs.h + 1, gs.q, gs.f), (gt.h, gt.q, gt.f));
        }
        for (s, t, _) in cube.differential(Theory::Khovanov).entries {
            let (gs, gt) = (cube.grading(s), cube.grading(t));
            prop_assert_eq!((gs.h + 1, gs.q), (gt.h, gt.q));
            prop_assert!(gt.f == gs.f || gt.f == gs.f - 2);
        }
    }

    #[test]
    fn khovanov_part_without_f_drop_is_skein(b in braid(4, 5)) {
        let d = decompose(&ComplexPair::new(&b.to_slice_word()).unwrap()).unwrap();
        prop_assert_eq!(d.report.d0_entries, d.report.skein_entries);
    }

    #[test]
    fn q_minimum_matches_formula(b in braid(4, 6)) {
        let ext = diagram_extremes(&StateCube::new(&b.to_slice_word()).unwrap());
        prop_assert_eq!(ext.j_min_formula, ext.j_min_enumerated);
        prop_assert_eq!(ext.f_min, -(b.strands() as i64));
    }

    #[test]
    fn rotation_keeps_skein_homology(b in braid(4, 5), k in 0usize..6) {
        prop_assume!(!b.is_empty());
        let v = conjugation_check(&b, &b.rotate(k % b.len()), Ring::Integers).unwrap();
        prop_assert!(v.holds(), "{:?}", v.difference);
    }

    #[test]
    fn cancelling_pair_keeps_skein_homology(b in braid(3, 3), at in 0usize..4, i in 1usize..3, neg in any::<bool>()) {
        prop_assume!(i < b.strands());
        let sign = if neg { Sign::Negative } else { Sign::Positive };
        let longer = b.insert_cancelling_pair(at.min(b.len()), BraidLetter::new(i, sign)).unwrap();
        let v = conjugation_check(&b, &longer, Ring::Integers).unwrap();
        prop_assert!(v.holds(), "{:?}", v.difference);
    }

    #[test]
    fn crossing_order_keeps_homology(b in braid(3, 5), seed in any::<u64>()) {
        let w = b.to_slice_word();
        let p = CrossingPermutation::Shuffle(seed).apply(&w).unwrap();
        for ring in [Ring::Integers, Ring::Mod2] {
            prop_assert_eq!(table_difference(&skein_homology(&w, ring).unwrap(), &skein_homology(&p, ring).unwrap()), None);
            prop_assert_eq!(table_difference(&khovanov_homology(&w, ring).unwrap(), &khovanov_homology(&p, ring).unwrap()), None);
        }
    }

    #[test]
    fn spectral_bound_holds(b in braid(4, 5)) {
        prop_assert!(spectral_bound(&ComplexPair::new(&b.to_slice_word()).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn dual_is_an_involution(b in braid(4, 5), index in 2usize..=3) {
        for c in harvest_configs(&b.to_slice_word(), index).unwrap() {
            prop_assert_eq!(&c.dual().dual(), &c);
            prop_assert_eq!(c.dual().circles().len(), c.full_surgery().circles().len());
        }
    }

    #[test]
    fn surgery_composes(b in braid(4, 5), first in 0u32..8, second in 0u32..8) {
        for c in harvest_configs(&b.to_slice_word(), 3).unwrap() {
            let (first, second) = (first & !second, second & !first);
            let whole = c.surgery_mask(first | second).unwrap();
            // positions of `second` among the arcs left after `first`
            let kept: Vec<usize> = (0..3).filter(|i| first >> i & 1 == 0).collect();
            let rest: u32 = kept.iter().enumerate().filter(|(_, &i)| second >> i & 1 == 1).map(|(j, _)| 1 << j).sum();
            let stepwise = c.surgery_mask(first).unwrap().surgery_mask(rest).unwrap();
            prop_assert_eq!(whole.encoding(), stepwise.encoding());
        }
    }

    #[test]
    fn canonical_form_ignores_relabelling(b in braid(4, 5), perm in Just([0usize, 1, 2]).prop_shuffle(), turns in prop::array::uniform3(0u8..4)) {
        for c in harvest_configs(&b.to_slice_word(), 3).unwrap() {
            let moved = c.relabel(&perm, &turns);
            prop_assert_eq!(moved.circles().len(), c.circles().len());
            prop_assert_eq!(moved.circles().trivial_mask().count_ones(), c.circles().trivial_mask().count_ones());
            prop_assert_eq!(moved.canonical_form(), c.canonical_form());
        }
    }
}
