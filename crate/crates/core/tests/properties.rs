use brickwork::characters::character_int;
use brickwork::hurwitz::{hurwitz_number, BranchProfile};
use brickwork::mc::{gaussian_schur_average, wick_expectation};
use brickwork::partition::{enumerate_partitions, factorial};
use brickwork::schur::{principal_specialization, schur_from_power_sums};
use brickwork::{ExactPowerSums, Partition};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn partition(max_weight: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=max_weight, 0..=max_weight)
        .prop_map(move |mut v| {
            let mut total = 0;
            v.retain(|&x| {
                total += x;
                total <= max_weight
            });
            v
        })
        .prop_map(Partition::from_unsorted)
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(l in partition(12)) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        prop_assert_eq!(l.hook_product(), l.conjugate().hook_product());
        prop_assert_eq!(l.dimension() * l.hook_product(), factorial(l.weight()));
    }

    #[test]
    fn conjugate_character_picks_up_sign(l in partition(7), seed in 0usize..100) {
        let classes = enumerate_partitions(l.weight());
        let mu = &classes[seed % classes.len()];
        let sign = if (mu.weight() - mu.length()).is_multiple_of(2) { 1 } else { -1 };
        prop_assert_eq!(character_int(&l.conjugate(), mu).unwrap(), sign * character_int(&l, mu).unwrap());
    }

    #[test]
    fn schur_at_identity_is_content_ratio(l in partition(7), n in 1usize..6) {
        let p = ExactPowerSums::constant(BigRational::from_integer(BigInt::from(n)), l.weight().max(1));
        prop_assert_eq!(schur_from_power_sums(&l, &p), principal_specialization(&l, n));
    }

    #[test]
    fn hurwitz_is_reorder_invariant(d in 1usize..=6, i in 0usize..100, j in 0usize..100, k in 0usize..100) {
        let parts = enumerate_partitions(d);
        let pick = |x: usize| parts[x % parts.len()].clone();
        let (a, b, c) = (pick(i), pick(j), pick(k));
        let h = |v: Vec<Partition>| hurwitz_number(&BranchProfile::sphere(v).unwrap()).unwrap();
        prop_assert_eq!(h(vec![a.clone(), b.clone(), c.clone()]), h(vec![c, a, b]));
    }

    #[test]
    fn gaussian_averages_vanish_in_odd_degree(l in partition(7), n in 1usize..5) {
        prop_assume!(l.weight() % 2 == 1);
        prop_assert_eq!(gaussian_schur_average(&l, n).unwrap(), BigRational::from_integer(0.into()));
        prop_assert_eq!(wick_expectation(&l, n).unwrap(), BigRational::from_integer(0.into()));
    }
}
