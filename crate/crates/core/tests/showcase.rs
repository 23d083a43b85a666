use weaklaw::finrel::{FinSet, Value};
use weaklaw::monadkit::{CheckConfig, Monad};
use weaklaw::zoo::FilterMonad;
use weaklaw::showcase::*;
use weaklaw::{Budget, Status};

fn cfg() -> CheckConfig {
    CheckConfig::default()
}

fn fact(r: &weaklaw::LawReport, key: &str) -> u64 {
    r.facts.get(key).and_then(|v| v.as_u64()).unwrap_or_else(|| panic!("no fact {key} on {}", r.name))
}

#[test]
fn lattice_counts_up_to_isomorphism() {
    let counts: Vec<usize> = (1..=5).map(|n| FinLattice::all(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 5]);
    let distributive = FinLattice::all(5).iter().filter(|l| l.is_distributive()).count();
    assert_eq!(distributive, 3);
    assert!(!FinLattice::m3().is_distributive());
    assert!(!FinLattice::n5().is_distributive());
}

#[test]
fn way_below_is_the_order_on_finite_lattices() {
    for n in 1..=5 {
        for l in FinLattice::all(n) {
            assert_eq!(way_below(&l), way_below_shortcut(&l));
            assert!(continuous_lattice_check(&l).is_pass());
            assert!(lawson_topology(&l).is_discrete());
        }
    }
}

#[test]
fn lattice_survey_passes() {
    let r = lattice_scan(&[1, 2, 3, 4], 3).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    let g4 = r.find("lattices of size 4").unwrap();
    assert_eq!(fact(g4, "lattices"), 2);
    assert_eq!(fact(g4, "distributive"), 2);
}

#[test]
fn indiscrete_topology_breaks_the_liminf_identity() {
    let l = FinLattice::chain(2);
    let r = liminf_adh_check(&l, &FinTopSpace::indiscrete(l.carrier())).unwrap();
    assert_eq!(r.find("liminf = inf adh").unwrap().status, Status::Fail);
    let ok = liminf_adh_check(&l, &FinTopSpace::discrete(l.carrier())).unwrap();
    assert!(ok.is_pass(), "{}", ok.to_text());
}

#[test]
fn vietoris_monad_on_discrete_spaces() {
    let r = vietoris_monad_fin(&[0, 1, 2], &cfg()).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    let g = r.find("discrete space of size 2").unwrap();
    assert_eq!(fact(g.find("lifted carrier is the closed subsets").unwrap(), "carrier"), 4);
}

#[test]
fn closure_formula_agrees_with_the_lifted_action() {
    for n in 0..=2 {
        let space = FinTopSpace::discrete(&FinSet::standard(n));
        let r = lemma3_check(&space).unwrap();
        assert!(r.is_pass(), "{}", r.to_text());
    }
}

#[test]
fn non_discrete_spaces_carry_no_beta_structure() {
    let x = FinSet::standard(2);
    assert!(discrete_beta_structure(&FinTopSpace::indiscrete(&x)).is_err());
}

#[test]
fn vietoris_subbasis_on_two_points_is_discrete() {
    let v = vietoris_subbasis(&FinTopSpace::discrete(&FinSet::standard(2)));
    assert_eq!(v.carrier().len(), 4);
    assert!(v.is_discrete());
}

#[test]
fn comprehension_matches_the_barr_derived_law() {
    for n in 0..=2 {
        let r = vietoris_delta_matches_extension(&FinSet::standard(n), Budget::default()).unwrap();
        assert!(r.is_pass(), "{}", r.to_text());
    }
}

#[test]
fn principal_family_goes_to_a_principal_ultrafilter() {
    let x = FinSet::atoms("X", &["a", "b"]);
    let d = vietoris_delta(&x, Budget::default()).unwrap();
    let px = FinSet::new("PX", x.subsets_by_mask(&Budget::default()).unwrap());
    let beta = FilterMonad::new(true, Budget::default());
    // the principal ultrafilter on PX at {a}
    let big = beta.unit(&px, &Value::set([Value::atom("a")])).unwrap();
    let got = d.apply(&big).unwrap();
    assert_eq!(got, Value::set([beta.unit(&x, &Value::atom("a")).unwrap()]));
}

#[test]
fn composite_is_the_filter_monad() {
    let r = composite_is_filter_monad(&[0, 1, 2, 3], &cfg()).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    for n in 0..=3usize {
        let g = r.find(&format!("size {n}")).unwrap();
        assert_eq!(fact(g.find("carrier bijection").unwrap(), "carrier"), 1 << n);
    }
}

#[test]
fn nonempty_variant_on_two_points() {
    let r = nonempty_variant_demo(&[1, 2], &cfg()).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    assert_eq!(fact(r.find("lifted carrier on 2 points").unwrap(), "carrier"), 3);
    assert!(!r.notes.is_empty());
}

#[test]
fn quantale_on_subsets_of_z2() {
    let m = CommMonoid::cyclic(2);
    let r = quantale_demo(&m).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    let zero = Value::set([m.unit().clone()]);
    let full = Value::set(m.carrier().iter().cloned());
    assert_eq!(m.set_product(&zero, &full).unwrap(), full);
}

#[test]
fn every_small_monoid_gives_a_quantale() {
    for n in 1..=3 {
        for m in CommMonoid::all(n) {
            let r = quantale_demo(&m).unwrap();
            assert!(r.is_pass(), "{}", r.to_text());
        }
    }
}

#[test]
fn commutative_monoid_counts() {
    // with the unit fixed at 0, labelled tables
    let counts: Vec<usize> = (1..=3).map(|n| CommMonoid::all(n).len()).collect();
    assert_eq!(counts[0], 1);
    assert_eq!(counts[1], 2);
    assert!(counts[2] > 0);
}

#[test]
fn subsemigroups_of_small_semilattices() {
    assert_eq!(subsemigroups(&FinLattice::chain(2)).unwrap().len(), 4);
    assert_eq!(subsemigroups(&FinLattice::diamond()).unwrap().len(), 14);
    for l in [FinLattice::chain(2), FinLattice::chain(3), FinLattice::diamond()] {
        let r = subsemigroup_demo(&l).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    }
}

#[test]
fn normal_bands_lift_to_their_subsemigroups() {
    let free1 = FinBand::free(1).unwrap();
    assert_eq!(free1.subsemigroups().unwrap().len(), 2);
    let bands = vec![free1, FinBand::free(2).unwrap(), FinBand::from_semilattice(&FinLattice::chain(2)).unwrap()];
    let r = normal_band_demo(&bands, 2, &cfg()).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_text());
}

#[test]
fn topology_enumeration_and_closure() {
    let x = FinSet::standard(3);
    assert_eq!(FinTopSpace::all(&x).unwrap().len(), 29);
    let s = FinTopSpace::indiscrete(&x);
    assert_eq!(s.closure(1), x.full_mask());
    assert!(FinTopSpace::new(&x, [0, 1, 2, 7]).is_err());
}
