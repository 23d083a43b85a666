use weaklaw::finrel::{FinSet, Value};
use weaklaw::lawengine::*;
use weaklaw::monadkit::CheckConfig;
use weaklaw::{Budget, Status};

fn a(s: &str) -> Value {
    Value::atom(s)
}

fn set(xs: &[Value]) -> Value {
    Value::set(xs.iter().cloned())
}

fn cfg() -> CheckConfig {
    CheckConfig::default()
}

#[test]
fn hitting_set_formula_on_two_points() {
    let d = pf_over_p(Budget::default());
    let x = FinSet::atoms("X", &["a", "b"]);
    let fam = set(&[set(&[a("a")]), set(&[a("a"), a("b")])]);
    let got = d.delta(&x, &fam).unwrap();
    assert_eq!(got, set(&[set(&[a("a")]), set(&[a("a"), a("b")])]));
    assert_eq!(d.delta(&x, &Value::empty_set()).unwrap(), set(&[Value::empty_set()]));
}

#[test]
fn pf_over_p_is_weak_and_drops_the_t_unit() {
    let d = pf_over_p(Budget::default());
    let r = check_law(&d, &[0, 1, 2], &cfg()).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    let extra = r.find("dropped T-unit diagram (not required)").unwrap();
    assert_eq!(extra.status, Status::Fail);

    let x = FinSet::atoms("X", &["a", "b"]);
    let t_unit = check_t_unit(&d, &x, &cfg()).unwrap();
    let w = t_unit.witness.unwrap();
    assert_eq!(w.input, set(&[a("a"), a("b")]));
    assert_eq!(w.left.unwrap(), set(&[set(&[a("a")]), set(&[a("b")]), set(&[a("a"), a("b")])]));
    assert_eq!(w.right.unwrap(), set(&[set(&[a("a")]), set(&[a("b")])]));
}

#[test]
fn beta_law_satisfies_all_four_at_finite_scale() {
    let d = p_over_beta(Budget::default());
    let r = check_law(&d, &[0, 1, 2], &cfg()).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    let extra = r.find("dropped T-unit diagram (not required)").unwrap();
    assert_eq!(extra.status, Status::Pass);
    assert!(extra.notes.iter().any(|n| n.contains("scale caveat")));
}

#[test]
fn multiset_law_is_strict() {
    let d = p_over_multiset(3, Budget::default());
    let r = check_law(&d, &[0, 1, 2], &cfg()).unwrap();
    assert!(r.is_pass(), "{}", r.to_text());
    assert_eq!(d.strength(), Strength::Strict);
}

use std::sync::Arc;

use weaklaw::barr::egli_milner;
use weaklaw::finrel::{FinFn, FinRel};
use weaklaw::monadkit::{check_algebra, check_monad_laws, AlgebraSpec, Functor, Monad, MonadRef};
use weaklaw::zoo;

fn shipped() -> Vec<DistLaw> {
    let b = Budget::default();
    vec![
        pf_over_p(b),
        p_over_beta(b),
        p_plus_over_beta(b),
        p_over_multiset(3, b),
        p_over_normalband(Some(3), b),
    ]
}

fn same_components(d: &DistLaw, e: &DistLaw, sizes: &[usize]) {
    for &n in sizes {
        let x = FinSet::standard(n);
        for v in d.ts().obj(&x).unwrap().iter() {
            // a degree-bounded law can leave its range on either route
            match (d.delta(&x, v), e.delta(&x, v)) {
                (Err(err), _) | (_, Err(err)) if err.is_out_of_range() => continue,
                (l, r) => assert_eq!(l.unwrap(), r.unwrap(), "{} at {v}", d.name()),
            }
        }
    }
}

/// An algebra on `carrier` whose action is given pointwise.
fn algebra(m: &MonadRef, carrier: &FinSet, act: impl Fn(&Value) -> Value) -> AlgebraSpec {
    let tx = m.obj(carrier).unwrap();
    AlgebraSpec::from_fn(m, &FinFn::new(&tx, carrier, |v| Ok(act(v))).unwrap()).unwrap()
}

fn chain2() -> FinSet {
    FinSet::standard(2)
}

fn meet_chain(v: &Value) -> Value {
    v.as_set().unwrap().iter().min().cloned().unwrap_or(a("1"))
}

fn sup_chain(v: &Value) -> Value {
    v.as_set().unwrap().iter().max().cloned().unwrap_or(a("0"))
}

#[test]
fn every_shipped_law_is_natural_and_named() {
    for d in shipped() {
        let r = check_law_naturality(&d, &[0, 1, 2], &cfg()).unwrap();
        assert!(r.is_pass(), "{}", r.to_text());
        let again = law_by_name(d.name(), Budget::default()).unwrap();
        assert_eq!(again.name(), d.name());
    }
    assert_eq!(law_by_name("p-over-pf", Budget::default()).unwrap().name(), "pf-over-p");
    assert!(law_by_name("pf-over-p(2)", Budget::default()).is_err());
    assert!(law_by_name("p-over-multiset(0)", Budget::default()).is_err());
    assert!(law_by_name("nope", Budget::default()).is_err());
}

#[test]
fn normal_band_law_is_weak() {
    let d = p_over_normalband(Some(2), Budget::default());
    let r = check_law(&d, &[0, 1, 2], &cfg()).unwrap();
    assert!(r.is_pass(), "{}", r.to_text());
}

#[test]
fn extension_round_trip_recovers_each_law() {
    for d in shipped() {
        let back = law_from_extension(d.name(), &extension_from_law(&d), d.strength());
        same_components(&d, &back, &[0, 1, 2]);
    }
}

#[test]
fn relation_lifts_give_the_shipped_laws() {
    let b = Budget::default();
    let from_pf = law_from_extension("barr pf", &barr_extension(&zoo::finite_powerset_monad()), Strength::Weak);
    same_components(&pf_over_p(b), &from_pf, &[0, 1, 2]);
    let x = FinSet::atoms("X", &["a", "b"]);
    let fam = set(&[set(&[a("a")]), set(&[a("a"), a("b")])]);
    assert_eq!(from_pf.delta(&x, &fam).unwrap(), set(&[set(&[a("a")]), set(&[a("a"), a("b")])]));

    let from_beta = law_from_extension("barr beta", &barr_extension(&zoo::ultrafilter_monad_fin()), Strength::Weak);
    same_components(&p_over_beta(b), &from_beta, &[0, 1, 2]);

    let from_m = law_from_extension("barr m", &barr_extension(&zoo::multiset_monad(3)), Strength::Strict);
    same_components(&p_over_multiset(3, b), &from_m, &[0, 1, 2]);
}

#[test]
fn extension_of_pf_over_p_is_egli_milner() {
    let ext = extension_from_law(&pf_over_p(Budget::default()));
    for nx in 0..=2 {
        for ny in 0..=2 {
            let (x, y) = (FinSet::standard(nx), FinSet::standard(ny));
            for m in 0..(1u64 << (nx * ny)) {
                let r = FinRel::from_mask(&x, &y, m);
                let py = zoo::powerset_monad().obj(&y).unwrap();
                let f = FinFn::new(&x, &py, |v| Ok(Value::set(r.image_of(v)))).unwrap();
                assert_eq!(ext.apply_rel(&f, &y).unwrap(), egli_milner(&r).unwrap());
            }
        }
    }
}

#[test]
fn strict_extension_has_kleisli_unit_and_mult() {
    let d = p_over_multiset(2, Budget::default());
    let ext = extension_from_law(&d);
    let x = FinSet::standard(2);
    let unit = ext.unit(&x).unwrap().unwrap();
    assert_eq!(unit.apply(&a("0")).unwrap(), set(&[Value::multiset([a("0")])]));
    assert!(extension_from_law(&pf_over_p(Budget::default())).unit(&x).is_none());
}

#[test]
fn multiset_lifting_is_the_complex_product() {
    let d = p_over_multiset(2, Budget::default());
    let z2 = FinSet::standard(2);
    let t = d.t().clone();
    let plus = algebra(&t, &z2, |v| {
        let ones = v.as_multiset().unwrap().iter().filter(|e| e.as_atom() == Some("1")).count();
        a(if ones % 2 == 0 { "0" } else { "1" })
    });
    assert!(check_algebra(&plus, true, &cfg()).unwrap().is_pass());
    let lifted = lifting_from_law(&d, &plus).unwrap();
    let prod = Value::multiset([set(&[a("0")]), set(&[a("0"), a("1")])]);
    assert_eq!(lifted.act(&prod).unwrap(), set(&[a("0"), a("1")]));
    assert!(check_algebra(&lifted, true, &cfg()).unwrap().is_pass());

    let l = weak_lift(&d, &plus).unwrap();
    assert!(l.iota.is_identity() || l.iota.images() == l.iota.dom().elements());
    assert_eq!(l.algebra.carrier.len(), 4);
    assert_eq!(l.algebra.images().unwrap(), lifted.images().unwrap());
}

#[test]
fn pf_over_p_lifts_the_diamond_to_its_subsemigroups() {
    let d = pf_over_p(Budget::default());
    let m = FinSet::atoms("M", &["0", "a", "b", "1"]);
    let meet2 = |p: &Value, q: &Value| -> Value {
        match (p.as_atom().unwrap(), q.as_atom().unwrap()) {
            (x, y) if x == y => p.clone(),
            ("1", _) => q.clone(),
            (_, "1") => p.clone(),
            _ => a("0"),
        }
    };
    let meet = algebra(d.t(), &m, |v| v.as_set().unwrap().iter().fold(a("1"), |acc, e| meet2(&acc, e)));
    assert!(check_algebra(&meet, true, &cfg()).unwrap().is_pass());
    let l = weak_lift(&d, &meet).unwrap();
    assert_eq!(l.algebra.carrier.len(), 14);
    for k in l.iota.images() {
        let pts = k.as_set().unwrap();
        for p in pts {
            for q in pts {
                assert!(k.contains(&meet2(p, q)));
            }
        }
    }
}

#[test]
fn beta_lifting_on_discrete_spaces_is_the_powerset() {
    let d = p_over_beta(Budget::default());
    for n in 0..=3 {
        let x = FinSet::standard(n);
        let algs = weaklaw::monadkit::enumerate_algebras(d.t(), &x, &cfg()).unwrap();
        assert_eq!(algs.len(), 1);
        let l = weak_lift(&d, &algs[0]).unwrap();
        assert_eq!(l.algebra.carrier.len(), 1 << n);
        assert!(l.pi.then(&l.iota).unwrap().is_identity());
    }
}

#[test]
fn lifting_round_trip_recovers_each_law() {
    for d in shipped() {
        let w = Arc::new(WeakLifting::from_law(&d));
        let back = law_from_lifting(&w, d.strength());
        same_components(&d, &back, &[0, 1, 2]);
    }
}

#[test]
fn weak_lifting_data_checks_out() {
    for d in [pf_over_p(Budget::default()), p_over_beta(Budget::default()), p_over_multiset(2, Budget::default())] {
        let w = WeakLifting::from_law(&d);
        let r = check_weak_lifting_data(&w, &[0, 1, 2], &cfg()).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    }
}

#[test]
fn corrupted_retraction_is_caught() {
    let w = Arc::new(WeakLifting::from_law(&pf_over_p(Budget::default())));
    let bad = corrupt_pi(w);
    let r = check_weak_lifting_data(&bad, &[1, 2], &cfg()).unwrap();
    assert_eq!(r.status, Status::Fail);
    let first = r.first_failure().unwrap();
    assert!(first.witness.is_some());
}

#[test]
fn composite_monads_satisfy_the_monad_laws() {
    let d = pf_over_p(Budget::default());
    let c: MonadRef = Arc::new(CompositeMonad::new(&d));
    // C(C(1)) already has 4960 elements, so the axioms are checked on the empty carrier
    let r = check_monad_laws(&c, &[0], &cfg()).unwrap();
    assert!(r.is_pass(), "{}", r.to_text());

    let beta: MonadRef = Arc::new(CompositeMonad::new(&p_over_beta(Budget::default())));
    for n in 0..=3 {
        assert_eq!(beta.obj(&FinSet::standard(n)).unwrap().len(), 1 << n);
    }
    let r = check_monad_laws(&beta, &[0, 1], &cfg()).unwrap();
    assert!(r.is_pass(), "{}", r.to_text());

    let m: MonadRef = Arc::new(CompositeMonad::new(&p_over_multiset(2, Budget::default())));
    let r = check_monad_laws(&m, &[0, 1], &cfg()).unwrap();
    assert!(r.is_pass(), "{}", r.to_text());
}

#[test]
fn identity_law_composite_is_the_outer_monad() {
    let p = zoo::powerset_monad();
    let d = identity_law(&p);
    assert!(check_law(&d, &[0, 1, 2], &cfg()).unwrap().is_pass());
    let c = CompositeMonad::new(&d);
    for n in 0..=3 {
        let x = FinSet::standard(n);
        let cx = c.obj(&x).unwrap();
        assert_eq!(cx, p.obj(&x).unwrap());
        for v in x.iter() {
            assert_eq!(c.unit(&x, v).unwrap(), p.unit(&x, v).unwrap());
        }
    }
}

#[test]
fn two_chain_is_a_delta_algebra() {
    let d = pf_over_p(Budget::default());
    let x = chain2();
    let t = FinFn::new(&d.t().obj(&x).unwrap(), &x, |v| Ok(meet_chain(v))).unwrap();
    let s = FinFn::new(&d.s().obj(&x).unwrap(), &x, |v| Ok(sup_chain(v))).unwrap();
    let r = check_delta_algebra(&d, &DeltaAlgebra::new(&t, &s).unwrap(), &cfg()).unwrap();
    assert_eq!(r.status, Status::Pass);
}

#[test]
fn m3_is_not_a_delta_algebra() {
    let d = pf_over_p(Budget::default());
    let x = FinSet::atoms("M3", &["0", "a", "b", "c", "1"]);
    let rank = |v: &Value| match v.as_atom().unwrap() {
        "0" => 0,
        "1" => 2,
        _ => 1,
    };
    let join2 = |p: &Value, q: &Value| if p == q || rank(q) == 0 { p.clone() } else if rank(p) == 0 { q.clone() } else { a("1") };
    let meet2 = |p: &Value, q: &Value| if p == q || rank(q) == 2 { p.clone() } else if rank(p) == 2 { q.clone() } else { a("0") };
    let t = FinFn::new(&d.t().obj(&x).unwrap(), &x, |v| {
        Ok(v.as_set().unwrap().iter().fold(a("1"), |acc, e| meet2(&acc, e)))
    })
    .unwrap();
    let s = FinFn::new(&d.s().obj(&x).unwrap(), &x, |v| {
        Ok(v.as_set().unwrap().iter().fold(a("0"), |acc, e| join2(&acc, e)))
    })
    .unwrap();
    let r = check_delta_algebra(&d, &DeltaAlgebra::new(&t, &s).unwrap(), &cfg()).unwrap();
    assert_eq!(r.status, Status::Fail);
    let w = r.first_failure().unwrap().witness.clone().unwrap();
    assert_eq!(w.input, set(&[set(&[a("a")]), set(&[a("b"), a("c")])]));
    assert_eq!(w.left.unwrap(), a("0"));
    assert_eq!(w.right.unwrap(), a("a"));
}

#[test]
fn three_presentations_of_algebras_agree() {
    for d in [pf_over_p(Budget::default()), p_over_beta(Budget::default()), identity_law(&zoo::powerset_monad())] {
        let r = check_equivalences(&d, &[0, 1, 2], &cfg()).unwrap();
        assert!(r.is_pass(), "{}", r.to_text());
    }
}
