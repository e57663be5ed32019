use decoupling::lattice::{BoxSpec, ExponentSet, MultiIndex};
use decoupling::matrix::{build_matrix, pf_vector, verify_identities, Node};
use decoupling::rational::{int, ratio};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identities_on_boxes(caps in prop::collection::vec(1u32..5, 1..4), deg in 2u32..8, p in 2i64..40) {
        let set = BoxSpec::new(caps, deg).unwrap().set();
        prop_assume!(set.degree() >= 2);
        let r = verify_identities(&set, &int(p)).unwrap();
        prop_assert!(r.passed());
    }

    #[test]
    fn matrix_does_not_depend_on_p(caps in prop::collection::vec(1u32..4, 1..3), deg in 2u32..6) {
        let set = BoxSpec::new(caps, deg).unwrap().set();
        prop_assume!(set.degree() >= 2);
        let a = build_matrix(&set, &int(3)).unwrap();
        let b = build_matrix(&set, &ratio(71, 3)).unwrap();
        prop_assert_eq!(a.entries, b.entries);
    }
}

#[test]
fn cubic_curve_fixed_vector() {
    let set = BoxSpec::new(vec![3], 3).unwrap().set();
    let v = pf_vector(&set).unwrap();
    assert_eq!(
        v,
        vec![
            (Node::Q(1), ratio(1, 2)),
            (Node::Q(2), int(1)),
            (Node::T(1), int(1)),
            (Node::T(2), int(2)),
        ]
    );
}

#[test]
fn non_box_down_set_identities() {
    let set = ExponentSet::from_elements(
        2,
        [[1, 0], [2, 0], [3, 0], [0, 1], [1, 1]].map(MultiIndex::from),
    )
    .unwrap();
    assert!(verify_identities(&set, &int(4)).unwrap().passed());
}

#[test]
fn degree_one_is_rejected() {
    let set = BoxSpec::new(vec![1, 1], 1).unwrap().set();
    assert!(build_matrix(&set, &int(4)).is_err());
}
