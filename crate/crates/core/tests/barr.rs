use std::sync::Arc;

use weaklaw::barr::*;
use weaklaw::finrel::{FinFn, FinRel, FinSet, Value};
use weaklaw::monadkit::{functor_of, CheckConfig, FunctorRef};
use weaklaw::zoo::{self, Identity};
use weaklaw::{Budget, Status};

fn a(s: &str) -> Value {
    Value::atom(s)
}

fn set(xs: &[Value]) -> Value {
    Value::set(xs.iter().cloned())
}

fn pf() -> FunctorRef {
    functor_of(&zoo::finite_powerset_monad())
}

fn beta() -> FunctorRef {
    functor_of(&zoo::ultrafilter_monad_fin())
}

fn all_relations(n: usize) -> Vec<FinRel> {
    let mut out = Vec::new();
    for x in 0..=n {
        for y in 0..=n {
            let (dx, dy) = (FinSet::standard(x), FinSet::standard(y));
            for m in 0..(1u64 << (x * y)) {
                out.push(FinRel::from_mask(&dx, &dy, m));
            }
        }
    }
    out
}

#[test]
fn lift_of_a_single_pair() {
    let x = FinSet::standard(2);
    let y = FinSet::atoms("Y", &["a"]);
    let r = FinRel::new(&x, &y, [(a("0"), a("a"))]).unwrap();
    let lift = barr_lift(&pf(), &r).unwrap();
    let expect = vec![(Value::empty_set(), Value::empty_set()), (set(&[a("0")]), set(&[a("a")]))];
    assert_eq!(lift.pairs(), &expect[..]);
    assert_eq!(egli_milner(&r).unwrap().pairs(), &expect[..]);
}

#[test]
fn identity_functor_lift_is_the_relation() {
    let id: FunctorRef = Arc::new(Identity::new(Budget::default()));
    for r in all_relations(2) {
        assert_eq!(barr_lift(&id, &r).unwrap(), r);
    }
}

#[test]
fn egli_milner_examples() {
    let x = FinSet::standard(2);
    let em = egli_milner(&FinRel::identity(&x)).unwrap();
    let px = zoo::powerset_monad().obj(&x).unwrap();
    assert_eq!(em, FinRel::identity(&px));
    let y = FinSet::standard(3);
    let total = egli_milner(&FinRel::total(&x, &y)).unwrap();
    for (s, t) in total.pairs() {
        let (s, t) = (s.expect_set().unwrap(), t.expect_set().unwrap());
        assert_eq!(s.is_empty(), t.is_empty());
    }
    assert_eq!(total.len(), 1 + 3 * 7);
}

#[test]
fn egli_milner_is_the_barr_lift_of_pf() {
    for r in all_relations(3) {
        assert_eq!(barr_lift(&pf(), &r).unwrap(), egli_milner(&r).unwrap(), "{r:?}");
    }
}

#[test]
fn beta_lift_is_the_barr_lift_of_beta() {
    let b = zoo::ultrafilter_monad_fin();
    for r in all_relations(3) {
        let lift = beta_lift(&r).unwrap();
        assert_eq!(barr_lift(&beta(), &r).unwrap(), lift, "{r:?}");
        // under the unit bijections the lift is r itself
        for x in r.dom().iter() {
            for y in r.cod().iter() {
                let (fx, gy) = (b.unit(r.dom(), x).unwrap(), b.unit(r.cod(), y).unwrap());
                assert_eq!(lift.related(&fx, &gy), r.related(x, y));
            }
        }
        assert_eq!(lift.len(), r.len());
    }
}

#[test]
fn pf_and_beta_are_weakly_cartesian() {
    let cfg = CheckConfig::default();
    for f in [pf(), beta()] {
        let r = check_weakly_cartesian_functor(&f, 3, &cfg).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_text());
        assert!(r.checked > 1000);
    }
}

#[test]
fn emptiness_functor_is_not_weakly_cartesian() {
    let f: FunctorRef = Arc::new(EmptinessFunctor::new(Budget::default()));
    let r = check_weakly_cartesian_functor(&f, 2, &CheckConfig::default()).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(r.witness.is_some());
}

#[test]
fn constant_functor_is_weakly_cartesian() {
    // images of all squares are identity squares on the constant set
    let f: FunctorRef = Arc::new(ConstantFunctor::new(&FinSet::standard(2), Budget::default()));
    let r = check_weakly_cartesian_functor(&f, 2, &CheckConfig::default()).unwrap();
    assert_eq!(r.status, Status::Pass);
}

#[test]
fn pf_unit_fails_with_the_collapsing_map() {
    let m = zoo::finite_powerset_monad();
    let r = check_weakly_cartesian_nat(&m, Component::Unit, 2, &CheckConfig::default()).unwrap();
    assert_eq!(r.status, Status::Fail);
    let w = r.witness.unwrap();
    let f = FinFn::constant(&FinSet::standard(2), &FinSet::standard(1), &a("0")).unwrap();
    assert_eq!(w.input, weaklaw::monadkit::fn_value(&f));
    assert_eq!(w.left.unwrap(), Value::pair(a("0"), set(&[a("0"), a("1")])));
}

#[test]
fn pf_mult_is_weakly_cartesian() {
    let m = zoo::finite_powerset_monad();
    let r = check_weakly_cartesian_nat(&m, Component::Mult, 2, &CheckConfig::default()).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_text());
}

#[test]
fn beta_unit_passes_at_finite_scale_with_caveat() {
    let m = zoo::ultrafilter_monad_fin();
    let r = check_weakly_cartesian_nat(&m, Component::Unit, 3, &CheckConfig::default()).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.notes.iter().any(|n| n.contains("infinite")));
    let r = check_weakly_cartesian_nat(&m, Component::Mult, 2, &CheckConfig::default()).unwrap();
    assert_eq!(r.status, Status::Pass);
}

#[test]
fn two_functoriality() {
    let cfg = CheckConfig::default();
    for f in [pf(), beta()] {
        let r = check_2functor(&f, 2, &cfg).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    }
    let bad: FunctorRef = Arc::new(EmptinessFunctor::new(Budget::default()));
    assert_eq!(check_2functor(&bad, 2, &cfg).unwrap().status, Status::Fail);
}

#[test]
fn lifted_unit_is_not_natural_but_mult_is() {
    let m = zoo::finite_powerset_monad();
    let r = check_lifted_naturality(&m, Component::Unit, 2).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(check_lifted_naturality(&m, Component::Mult, 2).unwrap().is_pass());
}

mod invariants {
    use super::*;
    use proptest::prelude::*;

    fn rel(n: usize, m: usize) -> impl Strategy<Value = FinRel> {
        any::<u64>().prop_map(move |mask| FinRel::from_mask(&FinSet::standard(n), &FinSet::standard(m), mask & ((1u64 << (n * m)) - 1)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn lifting_commutes_with_converse(r in rel(2, 3)) {
            prop_assert_eq!(barr_lift(&pf(), &r.converse()).unwrap(), barr_lift(&pf(), &r).unwrap().converse());
        }

        #[test]
        fn weakly_cartesian_lifting_preserves_composites(r in rel(2, 2), s in rel(2, 3)) {
            let lifted = barr_lift(&pf(), &r.compose(&s).unwrap()).unwrap();
            let composed = barr_lift(&pf(), &r).unwrap().compose(&barr_lift(&pf(), &s).unwrap()).unwrap();
            prop_assert_eq!(lifted, composed);
        }

        #[test]
        fn lifting_is_monotone(r in rel(2, 2), s in rel(2, 2)) {
            let u = r.union(&s).unwrap();
            prop_assert!(barr_lift(&pf(), &r).unwrap().is_subset(&barr_lift(&pf(), &u).unwrap()));
        }
    }
}
