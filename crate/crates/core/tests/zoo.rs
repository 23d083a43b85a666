use std::sync::Arc;

use weaklaw::finrel::{FinFn, FinSet, Value};
use weaklaw::monadkit::{check_monad_laws, CheckConfig, MonadRef};
use weaklaw::zoo::*;
use weaklaw::{Budget, Status};

fn a(s: &str) -> Value {
    Value::atom(s)
}

fn set(xs: &[Value]) -> Value {
    Value::set(xs.iter().cloned())
}

fn abc(labels: &[&str]) -> FinSet {
    FinSet::atoms("X", labels)
}

#[test]
fn powerset_carriers() {
    let x = abc(&["a", "b"]);
    assert_eq!(powerset_monad().obj(&x).unwrap().len(), 4);
    assert_eq!(nonempty_powerset_monad().obj(&x).unwrap().len(), 3);
    let p = powerset_monad().obj(&x).unwrap();
    assert_eq!(finite_powerset_monad().obj(&x).unwrap(), p);
    let m = powerset_monad();
    let t = set(&[set(&[a("a")]), set(&[a("a"), a("b")])]);
    assert_eq!(m.mult(&x, &t).unwrap(), set(&[a("a"), a("b")]));
}

#[test]
fn ultrafilters_are_principal() {
    let x = abc(&["1", "2", "3"]);
    let b = ultrafilter_monad_fin();
    let bx = b.obj(&x).unwrap();
    assert_eq!(bx.len(), 3);
    for v in x.iter() {
        let u = b.unit(&x, v).unwrap();
        assert!(bx.contains(&u));
        for s in u.expect_set().unwrap() {
            assert!(s.contains(v));
        }
        assert_eq!(u.expect_set().unwrap().len(), 4);
    }
    // principal at principal flattens to the principal ultrafilter
    let bbx = b.obj(&bx).unwrap();
    let eta = b.unit(&x, &a("2")).unwrap();
    let double = b.unit(&bx, &eta).unwrap();
    assert!(bbx.contains(&double));
    assert_eq!(b.mult(&x, &double).unwrap(), eta);
}

#[test]
fn filter_counts_and_generators() {
    let f = FilterMonad::new(false, Budget::default());
    use weaklaw::monadkit::Functor;
    for n in 0..=4 {
        let x = FinSet::standard(n);
        let fx = f.obj(&x).unwrap();
        assert_eq!(fx.len(), 1 << n);
        let pxs = x.subsets_by_mask(&Budget::default()).unwrap();
        let mut via: Vec<Value> = pxs.iter().map(|s| f.principal(&x, s).unwrap()).collect();
        via.sort();
        assert_eq!(via, fx.elements().to_vec());
        for s in &pxs {
            assert_eq!(&f.generator(&x, &f.principal(&x, s).unwrap()).unwrap(), s);
        }
    }
    assert_eq!(filter_monad_fin().obj(&abc(&["a", "b"])).unwrap().len(), 4);
    assert_eq!(filter_monad_fin().obj(&abc(&["a", "b", "c"])).unwrap().len(), 8);
}

#[test]
fn improper_filter_is_fixed_by_pushforward_to_a_point() {
    use weaklaw::monadkit::Functor;
    let f = FilterMonad::new(false, Budget::default());
    let x = abc(&["a", "b", "c"]);
    let one = FinSet::standard(1);
    let improper = f.principal(&x, &Value::empty_set()).unwrap();
    let to_one = FinFn::constant(&x, &one, &a("0")).unwrap().arrow();
    let img = f.fmap(&to_one, &improper).unwrap();
    assert_eq!(img, f.principal(&one, &Value::empty_set()).unwrap());
}

#[test]
fn pushforward_matches_preimage_formula() {
    use weaklaw::monadkit::Functor;
    let f = FilterMonad::new(false, Budget::default());
    let x = FinSet::standard(3);
    let y = FinSet::standard(2);
    let b = Budget::default();
    let py = y.subsets_by_mask(&b).unwrap();
    for g in FinFn::all(&x, &y, &b).unwrap() {
        for flt in f.obj(&x).unwrap().iter() {
            let push = f.fmap(&g.arrow(), flt).unwrap();
            let expect = Value::set(py.iter().filter(|bset| {
                let pre = Value::set(x.iter().filter(|v| bset.contains(&g.apply(v).unwrap())).cloned());
                flt.contains(&pre)
            }).cloned());
            assert_eq!(push, expect);
        }
    }
}

#[test]
fn multiset_examples() {
    let m = multiset_monad(2);
    let x = abc(&["a"]);
    let tx = m.obj(&x).unwrap();
    assert_eq!(tx.len(), 3);
    assert!(tx.contains(&Value::multiset([])));
    assert!(tx.contains(&Value::multiset([a("a"), a("a")])));
    let m3 = multiset_monad(3);
    let x3 = abc(&["a", "b", "c"]);
    let t = Value::multiset([Value::multiset([a("a")]), Value::multiset([a("b"), a("c")])]);
    assert_eq!(m3.mult(&x3, &t).unwrap(), Value::multiset([a("a"), a("b"), a("c")]));
    assert_eq!(m3.unit(&x3, &a("a")).unwrap(), Value::multiset([a("a")]));
    let big = Value::multiset([Value::multiset([a("a"), a("b")]), Value::multiset([a("b"), a("c")])]);
    assert!(m3.mult(&x3, &big).unwrap_err().is_out_of_range());
    for n in 0..=4 {
        assert_eq!(m3.obj(&FinSet::standard(n)).unwrap().len() as u128, m3.size_hint(n).unwrap());
    }
}

#[test]
fn normal_band_examples() {
    let m = normal_band_monad(1);
    assert_eq!(m.obj(&abc(&["x"])).unwrap().len(), 1);
    let m2 = normal_band_monad(2);
    let xy = abc(&["x", "y"]);
    assert_eq!(m2.obj(&xy).unwrap().len(), 6);
    let l = Value::bip([a("x")], a("x"), a("x")).unwrap();
    let r = Value::bip([a("x"), a("y")], a("y"), a("x")).unwrap();
    assert_eq!(band_product(&l, &r).unwrap(), Value::bip([a("x"), a("y")], a("x"), a("x")).unwrap());
    // flattening agrees with evaluating words
    let w = evaluate_word(&[a("x"), a("y"), a("x")]).unwrap();
    assert_eq!(w, Value::bip([a("x"), a("y")], a("x"), a("x")).unwrap());
    let nb = NormalBand::new(None, Budget::default());
    use weaklaw::monadkit::{Functor, Monad};
    let outer = Value::bip([l.clone(), r.clone()], l.clone(), r.clone()).unwrap();
    assert_eq!(nb.mult(&xy, &outer).unwrap(), band_product(&l, &r).unwrap());
    for n in 0..=4 {
        assert_eq!(nb.obj(&FinSet::standard(n)).unwrap().len() as u128, nb.size_hint(n).unwrap());
    }
}

#[test]
fn names_round_trip() {
    let b = Budget::default();
    for n in MONAD_NAMES {
        let m = by_name(n, b).unwrap();
        let again = by_name(&m.name(), b).unwrap();
        assert_eq!(again.name(), m.name());
    }
    assert_eq!(by_name("multiset(2)", b).unwrap().name(), "multiset(2)");
    assert!(by_name("multiset(x)", b).is_err());
    assert!(by_name("powerset(2)", b).is_err());
    assert!(by_name("nope", b).is_err());
    let j = serde_json::to_string(&MonadName::parse("normal-band(3)").unwrap()).unwrap();
    assert_eq!(j, r#"{"monad":"normal-band","degree":3}"#);
}

fn laws(m: &MonadRef, sizes: &[usize]) -> weaklaw::LawReport {
    let r = check_monad_laws(m, sizes, &CheckConfig::default()).unwrap();
    assert!(r.is_pass(), "{}", r.to_text());
    r
}

#[test]
fn monad_laws_powersets() {
    for m in [powerset_monad(), nonempty_powerset_monad(), finite_powerset_monad()] {
        let r = laws(&m, &[0, 1, 2, 3]);
        assert_eq!(r.find("size 2").unwrap().status, Status::Pass);
    }
}

#[test]
fn monad_laws_filters() {
    laws(&ultrafilter_monad_fin(), &[0, 1, 2, 3]);
    let r = laws(&filter_monad_fin(), &[0, 1, 2, 3]);
    assert_eq!(r.find("size 1").unwrap().status, Status::Pass);
    // FFF of a 2-element set has 65536 elements with about 4·10^7 members in total
    assert_eq!(r.find("size 2").unwrap().status, Status::SampledPass);
}

#[test]
fn monad_laws_truncated() {
    for m in [multiset_monad(3), normal_band_monad(3)] {
        let r = laws(&m, &[0, 1, 2, 3]);
        assert!(r.skipped > 0, "{}", r.to_text());
    }
    let id: MonadRef = Arc::new(Identity::new(Budget::default()));
    laws(&id, &[0, 1, 2, 3]);
}
