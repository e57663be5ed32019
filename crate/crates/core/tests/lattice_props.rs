use decoupling::lattice::{
    is_down_closed, level_counts, upset_closure, BoxSpec, ExponentSet, KBox, LevelCounts,
    MultiIndex,
};
use proptest::prelude::*;

fn caps_strategy(max_d: usize, max_cap: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=max_cap, 1..=max_d)
}

/// Level sizes by direct enumeration of the box.
fn brute_levels(caps: &[u32]) -> Vec<u64> {
    let total: u32 = caps.iter().sum();
    let mut out = vec![0u64; total as usize + 1];
    for p in KBox::new(caps.to_vec()).unwrap().points() {
        out[p.degree() as usize] += 1;
    }
    out
}

proptest! {
    #[test]
    fn level_recursion_matches_enumeration(caps in caps_strategy(4, 4)) {
        let brute = brute_levels(&caps);
        let k = KBox::new(caps.clone()).unwrap();
        prop_assert_eq!(level_counts(&k, brute.len() - 1), brute.clone());
        let lc = LevelCounts::new(&k);
        prop_assert_eq!(lc.get(-1), 0);
        prop_assert_eq!(lc.get(brute.len() as i64), 0);
    }

    #[test]
    fn box_sets_are_down_sets_with_ladder(caps in caps_strategy(3, 3), deg in 1u32..7) {
        let set = BoxSpec::new(caps, deg).unwrap().set();
        prop_assert!(set.is_down_set());
        let profile = set.profile().unwrap();
        prop_assert!(profile.ladder_holds());
        let k: u64 = set.elements().iter().map(|e| u64::from(e.degree())).sum();
        prop_assert_eq!(set.homogeneous_dimension(), k);
    }

    #[test]
    fn canonical_order_is_graded(caps in caps_strategy(3, 3), deg in 1u32..7) {
        let set = BoxSpec::new(caps, deg).unwrap().set();
        for w in set.elements().windows(2) {
            prop_assert!(w[0].degree() <= w[1].degree());
            if w[0].degree() == w[1].degree() {
                prop_assert!(w[0].entries() > w[1].entries());
            }
        }
    }

    #[test]
    fn upsets_are_up_closed(caps in caps_strategy(2, 3), gens in prop::collection::vec((0u32..4, 0u32..4), 0..3)) {
        let k = KBox::new(caps).unwrap();
        let ambient = k.sublevel(6);
        let gens: Vec<MultiIndex> = gens.into_iter().map(|(a, b)| MultiIndex::new(vec![a, b])).collect();
        let up = upset_closure(&gens, &ambient);
        for p in &ambient {
            let above = up.iter().any(|u| u.precedes(p));
            prop_assert_eq!(above, up.contains(p));
        }
        let rest: Vec<MultiIndex> = k
            .points()
            .into_iter()
            .filter(|p| !gens.iter().any(|g| g.precedes(p)))
            .collect();
        prop_assert!(is_down_closed(&rest));
    }
}

#[test]
fn non_example_is_a_down_set_but_not_a_box() {
    let set = ExponentSet::from_elements(
        2,
        [[1, 0], [2, 0], [3, 0], [0, 1], [1, 1]].map(MultiIndex::from),
    )
    .unwrap();
    assert!(set.is_down_set());
    assert!(set.as_box().is_none());
    assert_eq!(set.homogeneous_dimension(), 9);
}

#[test]
fn upset_of_unit_in_small_box() {
    let amb = KBox::new(vec![2, 2]).unwrap().sublevel(2);
    let mut up = upset_closure(&[MultiIndex::from([1, 0])], &amb);
    up.sort();
    let mut want = [[1, 0], [2, 0], [1, 1]].map(MultiIndex::from).to_vec();
    want.sort();
    assert_eq!(up, want);
}

#[test]
fn missing_predecessor_is_reported() {
    let set = ExponentSet::from_elements(2, [MultiIndex::from([1, 1])]).unwrap();
    let (missing, element) = set.down_set_violation().unwrap();
    assert_eq!(element, MultiIndex::from([1, 1]));
    assert!(missing.precedes(&element));
}
