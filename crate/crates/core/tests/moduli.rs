use annular_skein::diagram::{BraidWord, SliceWord};
use annular_skein::moduli::*;

fn braid(b: usize, t: &[i64]) -> SliceWord {
    BraidWord::from_tokens(b, t).to_slice_word()
}

fn find(word: &SliceWord, index: usize, pred: impl Fn(&SurgeryCube) -> bool) -> SurgeryCube {
    harvest_configs(word, index)
        .unwrap()
        .iter()
        .map(SurgeryCube::new)
        .find(|c| pred(c))
        .expect("configuration present in the cube")
}

fn census_of(cube: &SurgeryCube, t: u32) -> (usize, usize) {
    let z = cube.circles(t);
    (z.len(), z.trivial.iter().filter(|t| **t).count())
}

#[test]
fn annular_ladybug_surgeries_and_forced_decoration() {
    let cube = find(&braid(2, &[-1, 1]), 2, |c| ladybug_kind(c, 0, 0, 1) == Some(LadybugKind::Annular));
    let singles = [census_of(&cube, 1), census_of(&cube, 2)];
    assert!(singles.contains(&(2, 0)) && singles.contains(&(2, 2)), "{singles:?}");
    assert_eq!(decorations(&cube), vec![(1, 0)]);
    assert_eq!(cube.labels(0, 1), "w+");
    assert_eq!(cube.labels(3, 0), "w-");
    let poset = build_poset(&cube, 1, 0).unwrap();
    assert_eq!(poset.chains.len(), 4);
    let local: Vec<(usize, u32)> = poset.chains.iter().map(|c| (c.order[0], c.labels[1])).collect();
    let right = pair_interval(&cube, 0, (0, 1), &local, Convention::Right).unwrap();
    let opposite = pair_interval(&cube, 0, (0, 1), &local, Convention::Opposite).unwrap();
    for pairs in [&right, &opposite] {
        assert!(pairs.iter().all(|&(a, b)| local[a].0 != local[b].0));
    }
    assert!(right.iter().all(|p| !opposite.contains(p)));
    assert!(ladybug_matching(&cube, 0, 0, 1).unwrap().right_pair_consistent);
}

#[test]
fn essential_circle_with_alternating_arcs_has_no_decoration() {
    let cube = find(&braid(3, &[-2, -1]), 2, |c| {
        c.circles(0).len() == 1 && !c.circles(0).trivial[0] && decorations(c).is_empty()
    });
    // both single surgeries give one essential circle with a trivial one
    assert_eq!(census_of(&cube, 1).0, 2);
    assert!(build_poset(&cube, 0, 0).is_err());
}

#[test]
fn empty_surgery_is_the_identity() {
    for c in harvest_configs(&braid(3, &[1, -2, 1]), 2).unwrap() {
        assert_eq!(c.surgery(&[]).unwrap(), c);
        assert_eq!(c.dual().dual(), c);
        assert!(c.surgery(&[2]).is_err());
    }
}

#[test]
fn index_one_merge_has_one_chain() {
    let cube = find(&braid(2, &[1, 1]), 1, |c| census_of(c, 0).0 == 2);
    for (y, x) in decorations(&cube) {
        assert_eq!(build_poset(&cube, y, x).unwrap().chains.len(), 1);
    }
}

#[test]
fn c3_reproduces_the_printed_hexagons() {
    let word = braid(4, &[-1, 2, 1, 3, 2]);
    let cube = find(&word, 3, |c| !c3_labellings(c).is_empty());
    let arcs = c3_labellings(&cube)[0];
    let expected: Vec<Vec<usize>> = {
        let mut e: Vec<Vec<usize>> = C3_CYCLES.iter().map(|c| normalise(c)).collect();
        e.sort();
        e
    };
    assert_eq!(c3_cycles(&cube, arcs, Convention::Right).unwrap(), expected);
    assert_ne!(c3_cycles(&cube, arcs, Convention::Opposite).unwrap(), expected);
    let graph = BoundaryGraph::new(&cube, 1, 0, Convention::Right).unwrap();
    assert_eq!(graph.ladybugs.len(), 2);
    assert!(graph.ladybugs.iter().all(|l| l.2 == LadybugKind::Annular));
}

#[test]
fn c3_dual_graph_is_isomorphic_under_the_opposite_matching() {
    let word = braid(4, &[-1, 2, 1, 3, 2]);
    let cube = find(&word, 3, |c| !c3_labellings(c).is_empty());
    let dc = DecoratedConfig {
        config: cube.base().clone(),
        y: 1,
        x: 0,
    };
    let iso = dual_graph_iso(&dc, Convention::Right).unwrap();
    assert!(iso.holds(), "{iso:?}");
    assert_eq!(iso.vertices, 12);
    assert!(poset_reversal(&dc));
}

#[test]
fn hexagon_verdicts_on_a_four_strand_word() {
    for dc in harvest_decorated(&braid(4, &[-1, 2, 1, 3, 2]), 3).unwrap() {
        let check = check_hexagons(&dc, Convention::Right).unwrap();
        assert!(check.holds(), "{check:?}");
        assert!(matches!(check.verdict.vertices, 6 | 12));
    }
}

/// Drags node `u` once around the core of the annulus.
fn drag(c: &AbstractConfig, u: usize) -> AbstractConfig {
    let links = (0..4 * c.nodes() as u32)
        .map(|p| {
            let (q, w) = c.link(p);
            let at = |x: u32| (x as usize / 4 == u) as i32;
            (q, w + at(p) - at(q))
        })
        .collect();
    let smoothing = (0..c.nodes()).map(|n| c.smoothing(n)).collect();
    AbstractConfig::new(smoothing, c.arcs().to_vec(), links).unwrap()
}

#[test]
fn encoding_forgets_dragging_a_node_around_the_annulus() {
    for c in harvest_configs(&braid(3, &[1, -2, 1, 2]), 2).unwrap() {
        let dragged = drag(&c, 1);
        assert_eq!(dragged.circles(), c.circles());
        assert_eq!(dragged.encoding(), c.encoding());
        let turned = c.relabel(&[1, 0], &[2, 0]);
        assert_eq!(turned.canonical_form(), c.canonical_form());
    }
}
