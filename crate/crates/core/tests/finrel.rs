use proptest::prelude::*;

use weaklaw::finrel::{check_adjunction, FinFn, FinRel, FinSet, Value};

fn rel(n: usize, m: usize) -> impl Strategy<Value = FinRel> {
    any::<u64>().prop_map(move |mask| FinRel::from_mask(&FinSet::standard(n), &FinSet::standard(m), mask & ((1u64 << (n * m)) - 1)))
}

fn func(n: usize, m: usize) -> impl Strategy<Value = FinFn> {
    prop::collection::vec(0..m, n).prop_map(move |img| {
        FinFn::from_images(&FinSet::standard(n), &FinSet::standard(m), img.iter().map(|i| Value::atom(i.to_string())).collect())
            .unwrap()
    })
}

fn value() -> impl Strategy<Value = Value> {
    let leaf = "[a-c]".prop_map(Value::atom);
    leaf.prop_recursive(3, 16, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Value::set),
            prop::collection::vec(inner.clone(), 0..4).prop_map(Value::multiset),
            (inner.clone(), inner).prop_map(|(a, b)| Value::pair(a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn composition_is_associative(r in rel(2, 3), s in rel(3, 2), t in rel(2, 3)) {
        prop_assert_eq!(r.compose(&s).unwrap().compose(&t).unwrap(), r.compose(&s.compose(&t).unwrap()).unwrap());
    }

    #[test]
    fn identities_are_units(r in rel(3, 2)) {
        prop_assert_eq!(FinRel::identity(r.dom()).compose(&r).unwrap(), r.clone());
        prop_assert_eq!(r.compose(&FinRel::identity(r.cod())).unwrap(), r);
    }

    #[test]
    fn converse_reverses_composites(r in rel(2, 3), s in rel(3, 3)) {
        prop_assert_eq!(r.compose(&s).unwrap().converse(), s.converse().compose(&r.converse()).unwrap());
        prop_assert_eq!(r.converse().converse(), r);
    }

    #[test]
    fn composition_distributes_over_union(r in rel(2, 3), s in rel(3, 2), t in rel(3, 2)) {
        prop_assert_eq!(
            r.compose(&s.union(&t).unwrap()).unwrap(),
            r.compose(&s).unwrap().union(&r.compose(&t).unwrap()).unwrap()
        );
    }

    #[test]
    fn tabulation_recovers_the_relation(r in rel(3, 3)) {
        let (p, q) = r.tabulate();
        prop_assert_eq!(FinRel::cograph(&p).compose(&FinRel::graph(&q)).unwrap(), r);
    }

    #[test]
    fn graphs_compose_like_maps(f in func(3, 2), g in func(2, 3)) {
        prop_assert_eq!(FinRel::graph(&f.then(&g).unwrap()), FinRel::graph(&f).compose(&FinRel::graph(&g)).unwrap());
        prop_assert!(check_adjunction(&f).is_pass());
    }

    #[test]
    fn relations_round_trip_through_json(r in rel(3, 2)) {
        let back: FinRel = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn maps_round_trip_through_json(f in func(3, 3)) {
        let back: FinFn = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn values_round_trip_through_json(v in value()) {
        let back: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert_eq!(back, v);
    }
}
