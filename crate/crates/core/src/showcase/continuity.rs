use crate::error::Result;
use crate::finrel::{FinRel, Value};
use crate::report::{LawReport, Witness};
use crate::showcase::{way_below, way_below_shortcut, FinLattice, FinTopSpace};
use crate::zoo::filter_families;

fn mask_of_rel_row(l: &FinLattice, rel: &FinRel, x: usize, below: bool) -> u64 {
    (0..l.len())
        .filter(|&s| {
            if below {
                rel.related(l.element(s), l.element(x))
            } else {
                rel.related(l.element(x), l.element(s))
            }
        })
        .fold(0, |m, s| m | 1 << s)
}

/// `x = sup{s : s ≪ x}` for every `x`, with `≪` computed from its definition.
pub fn continuous_lattice_check(l: &FinLattice) -> LawReport {
    continuous_lattice_check_with(l, &way_below(l))
}

/// As [`continuous_lattice_check`] against a supplied way-below relation.
pub fn continuous_lattice_check_with(l: &FinLattice, wb: &FinRel) -> LawReport {
    let name = "continuous lattice";
    let anchor = "x = sup{s : s ≪ x}";
    let mut r = LawReport::pass(name, anchor, 0);
    for x in 0..l.len() {
        r.checked += 1;
        let s = l.sup(mask_of_rel_row(l, wb, x, true));
        if s != x {
            r.set_fail(Witness::paths("x ≠ sup{s : s ≪ x}", l.element(x).clone(), l.element(x).clone(), l.element(s).clone()));
            break;
        }
    }
    r
}

/// The topology generated by `s⁺ = {x : s ≪ x}` and `s⁻ = {x : s ≰ x}`.
pub fn lawson_topology(l: &FinLattice) -> FinTopSpace {
    let wb = way_below(l);
    let full = l.carrier().full_mask();
    let sub = (0..l.len()).flat_map(|s| [mask_of_rel_row(l, &wb, s, false), full & !l.up(s)]);
    FinTopSpace::generated(l.carrier(), sub)
}

/// `liminf F = sup{inf A : A ∈ F}`.
fn liminf(l: &FinLattice, filter: &[u32]) -> usize {
    filter.iter().map(|&a| l.inf(a as u64)).fold(l.bottom(), |acc, i| l.join(acc, i))
}

/// `adh F = ⋂_{A ∈ F} cl(A)`.
fn adherence(t: &FinTopSpace, filter: &[u32]) -> u64 {
    filter.iter().fold(t.carrier().full_mask(), |acc, &a| acc & t.closure(a as u64))
}

/// `liminf F = inf adh F` over every filter on the carrier, followed by
/// the convergence of each ultrafilter in the Lawson topology to exactly
/// its liminf.
pub fn liminf_adh_check(l: &FinLattice, top: &FinTopSpace) -> Result<LawReport> {
    l.carrier().require_same(top.carrier(), "lattice and space")?;
    let n = l.len();
    let mask_value = |m: u64| l.carrier().subset_value(m);
    let family = |f: &[u32]| Value::set(f.iter().map(|&a| mask_value(a as u64)));

    let mut cond = LawReport::pass("liminf = inf adh", "liminf F = inf adh F for any filter F", 0);
    for f in filter_families(n, false) {
        cond.checked += 1;
        let (lim, adh) = (liminf(l, &f), l.inf(adherence(top, &f)));
        if lim != adh {
            cond.set_fail(Witness::paths(
                "liminf F ≠ inf adh F",
                family(&f),
                l.element(lim).clone(),
                l.element(adh).clone(),
            ));
            break;
        }
    }

    let lawson = lawson_topology(l);
    let mut conv = LawReport::pass(
        "ultrafilters converge to their liminf",
        "an ultrafilter converges in the Lawson topology to the unique point liminf F",
        0,
    );
    for f in filter_families(n, true) {
        conv.checked += 1;
        let lim = liminf(l, &f);
        let limits: Vec<usize> = (0..n).filter(|&i| lawson.converges(&f, i)).collect();
        if limits != [lim] {
            let got = Value::set(limits.iter().map(|&i| l.element(i).clone()));
            conv.set_fail(Witness::paths("limit points ≠ {liminf F}", family(&f), got, Value::set([l.element(lim).clone()])));
            break;
        }
    }
    Ok(LawReport::group(format!("liminf and adherence on {}", l.carrier().name()), "", vec![cond, conv])
        .with_fact("discrete", top.is_discrete()))
}

/// The finite lattice survey: on every lattice of the given sizes, `≪`
/// from its definition agrees with `≤`, the lattice is continuous, its
/// Lawson topology is discrete and the liminf/adherence identity holds
/// for the discrete topology. On carriers of at most `scan` points every
/// Hausdorff topology is tried, and the identity holds exactly when the
/// topology is the Lawson one. Non-Hausdorff topologies satisfying the
/// identity anyway are counted in the fact `non_hausdorff_identity`.
pub fn lattice_scan(sizes: &[usize], scan: usize) -> Result<LawReport> {
    let mut groups = Vec::new();
    for &n in sizes {
        let lattices = FinLattice::all(n);
        let mut wb = LawReport::pass("≪ is ≤", "way-below from its definition equals the order", 0);
        let mut cont = LawReport::pass("continuous", "x = sup{s : s ≪ x}", 0);
        let mut lawson = LawReport::pass("Lawson topology is discrete", "s⁺ = {x : s ≪ x}, s⁻ = {x : s ≰ x}", 0);
        let mut adh = LawReport::pass("liminf = inf adh, discrete topology", "liminf F = inf adh F", 0);
        let mut pairing = LawReport::pass(
            "identity holds exactly for the Lawson topology",
            "for compact Hausdorff topologies, liminf F = inf adh F iff the topology is the Lawson topology",
            0,
        );
        let mut coarse = 0usize;
        for l in &lattices {
            let label = || order_value(l);
            wb.checked += 1;
            if way_below(l) != way_below_shortcut(l) {
                wb.set_fail(Witness::new("naive ≪ differs from ≤", label()));
            }
            cont.merge(continuous_lattice_check(l), &label);
            lawson.checked += 1;
            let lt = lawson_topology(l);
            if !lt.is_discrete() {
                lawson.set_fail(Witness::new("Lawson topology is not discrete", label()));
            }
            adh.merge(liminf_adh_check(l, &FinTopSpace::discrete(l.carrier()))?, &label);
            if n <= scan {
                for t in FinTopSpace::all(l.carrier())? {
                    pairing.checked += 1;
                    let holds = liminf_adh_check(l, &t)?.find("liminf = inf adh").is_some_and(|r| r.is_pass());
                    if !t.is_hausdorff() {
                        coarse += usize::from(holds);
                        continue;
                    }
                    if holds != (t == lt) {
                        pairing.set_fail(Witness::new(
                            format!("identity {} but the topology is {}the Lawson one", if holds { "holds" } else { "fails" }, if t == lt { "" } else { "not " }),
                            Value::pair(label(), t.opens_value()),
                        ));
                    }
                }
            }
        }
        let mut children = vec![wb, cont, lawson, adh];
        if n <= scan {
            children.push(pairing.with_fact("non_hausdorff_identity", coarse));
        }
        let g = LawReport::group(format!("lattices of size {n}"), "", children)
            .with_fact("lattices", lattices.len())
            .with_fact("distributive", lattices.iter().filter(|l| l.is_distributive()).count());
        groups.push(g);
    }
    Ok(LawReport::group("finite lattice survey", "continuous lattices and the Lawson topology", groups))
}

trait Merge {
    fn merge(&mut self, r: LawReport, label: &dyn Fn() -> Value);
}

impl Merge for LawReport {
    fn merge(&mut self, r: LawReport, label: &dyn Fn() -> Value) {
        self.checked += 1;
        if !r.is_pass() && !self.is_fail() {
            let inner = r.first_failure().and_then(|f| f.witness.clone());
            let mut w = Witness::new(format!("fails on a lattice: {}", r.name), label());
            if let Some(i) = inner {
                w.left = Some(i.input);
            }
            self.set_fail(w);
        }
    }
}

/// The strict order as a set of pairs, used to name a lattice in witnesses.
pub fn order_value(l: &FinLattice) -> Value {
    Value::set(
        l.order_rel()
            .pairs()
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| Value::pair(a.clone(), b.clone())),
    )
}
