use num_bigint::{BigInt, BigUint};
use pickychar::arith::factorial;
use pickychar::bijection::{gamma_reduction, verify};
use pickychar::characters::{column, MnEvaluator};
use pickychar::local::{irr_local, LocalChar, LocalGroup, WreathElement};
use pickychar::subnormalizer::{random_two_element, sub_shape_2};
use pickychar::{centralizer_order, degree, mn_value, CoreTower, CycleType, Partition, Permutation};
use proptest::prelude::*;
use proptest::sample::select;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn partition(max_n: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_n, 0..=max_n).prop_map(move |mut parts| {
        let mut total = 0;
        parts.retain(|&p| {
            total += p;
            total <= max_n
        });
        Partition::from_unsorted(parts)
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).expect("shuffle is a bijection"))
}

fn cycle_type_of(l: &Partition) -> CycleType {
    CycleType::new(l.parts().to_vec()).expect("nonempty")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn core_and_quotient_determine_the_partition(l in partition(14), q in 2usize..=5) {
        let core = l.q_core(q).unwrap();
        let quotient = l.q_quotient(q).unwrap();
        prop_assert!(core.is_q_core(q));
        let w: usize = quotient.iter().map(Partition::size).sum();
        prop_assert_eq!(l.q_weight(q).unwrap(), w);
        prop_assert_eq!(core.size() + q * w, l.size());
        prop_assert_eq!(Partition::from_core_and_quotient(&core, &quotient, q).unwrap(), l);
    }

    #[test]
    fn towers_round_trip(l in partition(16), p in select(vec![2usize, 3, 5])) {
        let t = CoreTower::build(&l, p).unwrap();
        prop_assert_eq!(t.size(), l.size());
        prop_assert_eq!(t.to_partition().unwrap(), l);
    }

    #[test]
    fn hook_length_formula(l in partition(14)) {
        prop_assert_eq!(degree(&l) * l.hook_product(), factorial(l.size()));
        prop_assert_eq!(degree(&l.conjugate()), degree(&l));
        prop_assert_eq!(l.conjugate().conjugate(), l);
    }

    #[test]
    fn mn_value_does_not_depend_on_cycle_order(
        l in partition(11).prop_filter("nonempty", |l| l.size() > 0),
        seed in any::<u64>(),
    ) {
        let n = l.size();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_two_element(n, &mut rng).cycle_type();
        let mut lengths = t.lengths().to_vec();
        let want = mn_value(&l, &t).unwrap();
        lengths.reverse();
        prop_assert_eq!(MnEvaluator::with_order(lengths.clone()).value(&l).unwrap(), want.clone());
        let r = seed as usize % lengths.len();
        lengths.rotate_left(r);
        prop_assert_eq!(MnEvaluator::with_order(lengths).value(&l).unwrap(), want);
    }

    #[test]
    fn conjugate_partition_twists_by_sign(l in partition(10).prop_filter("nonempty", |l| l.size() > 0), ty in partition(10)) {
        let n = l.size();
        let mut parts = ty.parts().iter().copied().filter(|&p| p <= n).collect::<Vec<_>>();
        let mut s: usize = parts.iter().sum();
        while s > n {
            s -= parts.pop().unwrap();
        }
        parts.extend(std::iter::repeat_n(1, n - s));
        let t = CycleType::new(parts).unwrap();
        let sign = if t.lengths().iter().filter(|&&c| c % 2 == 0).count() % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(mn_value(&l.conjugate(), &t).unwrap(), mn_value(&l, &t).unwrap() * BigInt::from(sign));
    }

    #[test]
    fn columns_square_sum_to_centralizers(t in partition(10).prop_filter("nonempty", |l| l.size() > 0)) {
        let ct = cycle_type_of(&t);
        let sum: BigInt = column(&ct).into_iter().map(|(_, v)| &v * &v).sum();
        prop_assert_eq!(sum, BigInt::from(centralizer_order(&ct)));
    }

    #[test]
    fn permutation_text_and_group_laws(a in permutation(9), b in permutation(9), c in permutation(9)) {
        prop_assert_eq!(Permutation::parse(&a.to_string(), Some(9)).unwrap(), a.clone());
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(a.conjugate_by(&b).cycle_type(), a.cycle_type());
        prop_assert_eq!(a.pow(a.order() as u64), Permutation::identity(9));
    }

    #[test]
    fn subnormalizer_shape_is_conjugation_invariant(seed in any::<u64>(), n in 2usize..=12, h in permutation(12)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_two_element(n, &mut rng);
        let x12 = x.extend(12);
        let y = x12.conjugate_by(&h);
        prop_assert_eq!(sub_shape_2(&x12).unwrap().order(), sub_shape_2(&y).unwrap().order());
    }

    #[test]
    fn local_characters_are_class_functions(i in 0usize..20, a in 0usize..128, b in 0usize..128) {
        let g = LocalGroup::tower(3);
        let irr = irr_local(3).unwrap();
        let all = WreathElement::all(3).unwrap();
        let (x, h) = (all[a].to_permutation(), all[b].to_permutation());
        let chi = &irr[i % irr.len()];
        prop_assert_eq!(chi.value(&g, &x.conjugate_by(&h)).unwrap(), chi.value(&g, &x).unwrap());
        prop_assert_eq!(chi.value(&g, &Permutation::identity(8)).unwrap(), BigInt::from(chi.degree()));
    }

    #[test]
    fn local_labels_round_trip(i in 0usize..230) {
        let irr = irr_local(4).unwrap();
        let chi = &irr[i];
        let parsed: LocalChar = chi.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, chi);
        prop_assert_eq!(parsed.degree(), chi.degree());
        prop_assert!(chi.degree() <= BigUint::from(64u32));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_pairings_verify_for_random_two_elements(seed in any::<u64>(), n in 1usize..=11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_two_element(n, &mut rng);
        let p = gamma_reduction(&x).unwrap();
        let r = verify(&p);
        prop_assert!(r.passed(), "{}: {:?}", x, r.failures());
    }
}
