use dpcount_core::{DivisorClass, GwEngine, ResultRecord, SurfaceModel};
use proptest::prelude::*;

fn class_on(k: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = DivisorClass> {
    (range.clone(), prop::collection::vec(range, k)).prop_map(|(d, m)| DivisorClass::new(d, m))
}

fn pair_of_classes() -> impl Strategy<Value = (DivisorClass, DivisorClass, DivisorClass)> {
    (0usize..=8).prop_flat_map(|k| (class_on(k, -20..=20), class_on(k, -20..=20), class_on(k, -20..=20)))
}

proptest! {
    #[test]
    fn pairing_is_symmetric_and_bilinear((a, b, c) in pair_of_classes()) {
        prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
        let ab = &a + &b;
        prop_assert_eq!(ab.intersect(&c).unwrap(), a.intersect(&c).unwrap() + b.intersect(&c).unwrap());
        let neg = -&a;
        prop_assert_eq!(neg.intersect(&c).unwrap(), -a.intersect(&c).unwrap());
    }

    #[test]
    fn delta_is_additive_up_to_one((a, b, _) in pair_of_classes()) {
        prop_assert_eq!(a.delta() + b.delta(), (&a + &b).delta() - 1);
    }

    #[test]
    fn genus_parity((a, _, _) in pair_of_classes()) {
        prop_assert_eq!((a.self_intersection() - a.anticanonical_degree()).rem_euclid(2), 0);
    }

    #[test]
    fn canonical_form_is_an_idempotent_sort((a, _, _) in pair_of_classes()) {
        let c = a.canonical_form();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(c.canonical_form(), c.clone());
        prop_assert_eq!(c.self_intersection(), a.self_intersection());
        prop_assert_eq!(c.delta(), a.delta());
    }

    #[test]
    fn literal_round_trip((a, _, _) in pair_of_classes()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<DivisorClass>().unwrap(), a);
    }

    #[test]
    fn result_record_json_round_trip(
        k in 0usize..=8,
        class in "[0-9]{1,2};[0-9,]{0,10}",
        n in any::<u128>(),
        c in any::<i128>(),
        valid in any::<bool>(),
    ) {
        let r = ResultRecord { k, class, n: n.into(), c: c.into(), valid };
        let text = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<ResultRecord>(&text).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_ignore_point_order(
        (beta, perm) in (1usize..=4).prop_flat_map(|k| {
            let perm = Just((0..k).collect::<Vec<usize>>()).prop_shuffle();
            ((1i64..=5, prop::collection::vec(0i64..=3, k)).prop_map(|(d, m)| DivisorClass::new(d, m)), perm)
        })
    ) {
        let engine = GwEngine::new();
        let s = SurfaceModel::of(&beta).unwrap();
        let shuffled = beta.permuted(&perm);
        let n = engine.n_beta_direct(&s, &beta).unwrap();
        prop_assert!(n >= 0.into());
        prop_assert_eq!(n, engine.n_beta_direct(&s, &shuffled).unwrap());
        if beta.delta() >= 1 {
            let a = engine.c_beta(&s, &beta).unwrap();
            let b = engine.c_beta(&s, &shuffled).unwrap();
            prop_assert_eq!(a.value, b.value);
            prop_assert_eq!(a.valid, b.valid);
        }
    }
}
