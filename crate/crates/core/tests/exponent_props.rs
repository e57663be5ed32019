use decoupling::exponents::{
    gamma_closed, gamma_lower, gamma_tilde, gamma_tilde_l2, RecursionEvaluator, Penalty,
};
use decoupling::lattice::{BoxSpec, ExponentSet, KBox, MultiIndex};
use decoupling::rational::{int, ratio, Rational};
use proptest::prelude::*;

fn p_strategy() -> impl Strategy<Value = Rational> {
    (2i64..60, 1i64..5).prop_filter_map("p >= 2", |(n, d)| {
        let p = ratio(n, d);
        (p >= int(2)).then_some(p)
    })
}

/// Down-sets as down-closures of a few random generators.
fn down_set_strategy() -> impl Strategy<Value = ExponentSet> {
    (1usize..=3, prop::collection::vec(prop::collection::vec(0u32..3, 3), 1..4)).prop_map(
        |(d, gens)| {
            let mut elems = Vec::new();
            for g in gens {
                let g = &g[..d];
                for p in KBox::new(g.iter().map(|x| x + 1).collect()).unwrap().points() {
                    if !p.is_zero() && p.entries().iter().zip(g).all(|(a, b)| a <= b) {
                        elems.push(p);
                    }
                }
            }
            if elems.is_empty() {
                elems.push(MultiIndex::unit(d, 0));
            }
            ExponentSet::from_elements(d, elems).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn memoized_equals_plain(set in down_set_strategy(), p in p_strategy()) {
        let mut a = RecursionEvaluator::new(Penalty::InverseP);
        let mut b = RecursionEvaluator::new(Penalty::InverseP);
        prop_assert_eq!(a.evaluate(&set, &p).unwrap(), b.evaluate_unmemoized(&set, &p).unwrap());
    }

    #[test]
    fn exponent_range(set in down_set_strategy(), p in p_strategy()) {
        let g = gamma_tilde(&set, &p).unwrap();
        let d = set.dim() as i64;
        prop_assert!(g >= ratio(set.essential_dim() as i64, 2));
        prop_assert!(g <= int(d));
        prop_assert!(gamma_tilde_l2(&set, &p).unwrap() >= g);
    }

    #[test]
    fn box_exponent_above_trivial_bounds(caps in prop::collection::vec(1u32..4, 1..4), deg in 1u32..8, p in p_strategy()) {
        let set = BoxSpec::new(caps.clone(), deg).unwrap().set();
        let d = int(caps.len() as i64);
        let k = Rational::from_integer(set.homogeneous_dimension().into());
        let g = gamma_tilde(&set, &p).unwrap();
        prop_assert!(g >= &d / int(2));
        prop_assert!(g >= &d - k / &p);
    }

    #[test]
    fn closed_form_is_permutation_invariant(
        caps in prop::collection::vec(1u32..4, 1..4),
        deg in 1u32..8,
        p in p_strategy(),
    ) {
        let k = KBox::new(caps.clone()).unwrap();
        let lower = gamma_lower(&k, deg, &p).unwrap();
        let (closed, _) = gamma_closed(&k.sorted(), deg, &p).unwrap();
        prop_assert_eq!(&lower, &closed);
        let mut rev = caps.clone();
        rev.reverse();
        prop_assert_eq!(gamma_lower(&KBox::new(rev).unwrap(), deg, &p).unwrap(), lower);
    }
}

#[test]
fn unrolled_parabola() {
    let set = BoxSpec::new(vec![2], 2).unwrap().set();
    assert_eq!(gamma_tilde(&set, &int(8)).unwrap(), ratio(5, 8));
    assert_eq!(gamma_tilde(&set, &int(4)).unwrap(), ratio(1, 2));
}

#[test]
fn non_example_recursion_is_well_defined() {
    let set = ExponentSet::from_elements(
        2,
        [[1, 0], [2, 0], [3, 0], [0, 1], [1, 1]].map(MultiIndex::from),
    )
    .unwrap();
    let g = gamma_tilde(&set, &int(12)).unwrap();
    assert!(g >= int(1) && g <= int(2));
}
