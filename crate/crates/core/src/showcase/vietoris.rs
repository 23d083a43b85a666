use std::sync::Arc;

use crate::error::{Budget, Error, Result};
use crate::finrel::{FinFn, FinSet, Value};
use crate::lawengine::{barr_extension, law_from_extension, p_over_beta, weak_lift, CompositeMonad, Strength, WeakLifting};
use crate::monadkit::{check_monad_laws, enumerate_algebras, AlgebraSpec, CheckConfig, Functor, Monad, MonadRef};
use crate::report::{LawReport, Witness};
use crate::showcase::{lawson_topology, FinLattice, FinTopSpace};
use crate::zoo::{filter_families, powerset_monad, FilterMonad, Powerset, PowersetKind};

fn beta(budget: Budget) -> Arc<FilterMonad> {
    Arc::new(FilterMonad::new(true, budget))
}

fn powerset_of(x: &FinSet, budget: &Budget) -> Result<FinSet> {
    Ok(FinSet::new(format!("P({})", x.name()), x.subsets_by_mask(budget)?))
}

/// The ultrafilters on `x`, found by search and written as families of
/// subsets.
fn ultrafilters(x: &FinSet) -> Result<Vec<Value>> {
    if x.len() > crate::zoo::MAX_BASE {
        return Err(Error::budget(format!("ultrafilters on {}", x.name()), 1u128 << x.len().min(127), 1 << 24));
    }
    Ok(filter_families(x.len(), true)
        .into_iter()
        .map(|f| Value::set(f.into_iter().map(|m| x.subset_value(m as u64))))
        .collect())
}

/// `δ: βPX → PβX`, `𝐅 ↦ {F ∈ βX : ⋃𝒜 ∈ F for all 𝒜 ∈ 𝐅}`.
pub fn vietoris_delta(x: &FinSet, budget: Budget) -> Result<FinFn> {
    let b = beta(budget);
    let px = powerset_of(x, &budget)?;
    let bpx = b.obj(&px)?;
    let bx = FinSet::new(format!("β({})", x.name()), ultrafilters(x)?);
    let pbx = powerset_of(&bx, &budget)?;
    FinFn::new(&bpx, &pbx, |big| {
        let unions = big
            .expect_set()?
            .iter()
            .map(|a| Value::union_all(a.expect_set()?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::set(bx.iter().filter(|f| unions.iter().all(|u| f.contains(u))).cloned()))
    })
}

/// The convergence map `βX → X` of a discrete finite space: each
/// (principal) ultrafilter goes to its point.
pub fn discrete_beta_structure(space: &FinTopSpace) -> Result<AlgebraSpec> {
    if !space.is_discrete() {
        return Err(Error::InvalidStructure(format!(
            "{} is not discrete, and finite compact Hausdorff spaces are",
            space.carrier().name()
        )));
    }
    let b = beta(Budget::default());
    let x = space.carrier();
    let bx = b.obj(x)?;
    let xi = FinFn::new(&bx, x, |u| {
        let g = b.generator(x, u)?;
        g.expect_set()?
            .first()
            .cloned()
            .ok_or_else(|| Error::InvalidStructure("ultrafilter with empty generator".into()))
    })?;
    let m: MonadRef = b;
    AlgebraSpec::from_fn(&m, &xi)
}

/// `𝐅 ↦ ⋂_{𝒜 ∈ 𝐅} cl(⋃𝒜)` on `βPX`.
pub fn vietoris_action(space: &FinTopSpace) -> Result<FinFn> {
    discrete_beta_structure(space)?;
    let budget = Budget::default();
    let x = space.carrier();
    let px = powerset_of(x, &budget)?;
    let bpx = beta(budget).obj(&px)?;
    FinFn::new(&bpx, &px, |big| closure_meet(space, big))
}

fn closure_meet(space: &FinTopSpace, big: &Value) -> Result<Value> {
    let x = space.carrier();
    let mut acc = x.full_mask();
    for a in big.expect_set()? {
        acc &= space.closure(x.mask_of(&Value::union_all(a.expect_set()?)?)?);
    }
    Ok(x.subset_value(acc))
}

/// The closure formula against `Pξ∘δ_X` at every point of `βPX`, and the idempotent
/// `Pξ∘δ_X∘η_{PX}` against closure.
pub fn lemma3_check(space: &FinTopSpace) -> Result<LawReport> {
    let name = format!("semialgebra action on P({})", space.carrier().name());
    let res = (|| -> Result<LawReport> {
        let a = discrete_beta_structure(space)?;
        let law = p_over_beta(Budget::default());
        let x = space.carrier();
        let act = vietoris_action(space)?;
        let xi = a.action.clone();
        let mut formula = LawReport::pass("closure formula", "𝐅 ↦ ⋂_{𝒜 ∈ 𝐅} cl(⋃𝒜) equals Pξ∘δ_X", 0);
        for big in act.dom().iter() {
            formula.checked += 1;
            let lhs = act.apply(big)?;
            let rhs = law.s().fmap(&xi, &law.delta(x, big)?)?;
            if lhs != rhs {
                formula.set_fail(Witness::paths("closure formula ≠ Pξ∘δ", big.clone(), lhs, rhs));
                break;
            }
        }
        let mut idem = LawReport::pass("idempotent is closure", "Pξ∘δ_X∘η_{PX} sends B to its closure", 0);
        let px = act.cod().clone();
        for b in px.iter() {
            idem.checked += 1;
            let lhs = act.apply(&law.t().unit(&px, b)?)?;
            let rhs = space.closure_of(b)?;
            if lhs != rhs {
                idem.set_fail(Witness::paths("Pξ∘δ∘η(B) ≠ cl(B)", b.clone(), lhs, rhs));
                break;
            }
        }
        Ok(LawReport::group(name.clone(), "", vec![formula, idem]))
    })();
    LawReport::or_budget(&name, "", res)
}

/// The hit-and-miss topology on the closed subsets of `space`, from
/// `C⁺ = {A : A ∩ C = ∅}` and `C⁻ = {A : A ⊄ C}`.
pub fn vietoris_subbasis(space: &FinTopSpace) -> FinTopSpace {
    let x = space.carrier();
    let closed = space.closed_sets();
    let vx = FinSet::new(format!("V({})", x.name()), closed.iter().map(|&c| x.subset_value(c)));
    let index: Vec<u64> = vx.iter().map(|v| x.mask_of(v).expect("closed set of the carrier")).collect();
    let family = |p: &dyn Fn(u64) -> bool| -> u64 {
        index.iter().enumerate().filter(|(_, &a)| p(a)).fold(0, |m, (i, _)| m | 1 << i)
    };
    let sub: Vec<u64> = closed
        .iter()
        .flat_map(|&c| [family(&|a| a & c == 0), family(&|a| a & !c != 0)])
        .collect();
    FinTopSpace::generated(&vx, sub)
}

/// The finite form of the Vietoris monad as a weak lifting: for each
/// discrete space of the given sizes, the unique β-algebra is lifted
/// through the `P`-over-`β` law and the lifted monad is compared with
/// closed subsets, singletons, unions and direct images. Multiplication
/// is compared on carriers of at most two points, since lifting `VX`
/// again needs ultrafilters on `PVX`.
pub fn vietoris_monad_fin(sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let name = "Vietoris monad as a weak lifting";
    let anchor = "the weak lifting of the power-set monad along the canonical weak distributive law over β";
    let res = (|| -> Result<LawReport> {
        let law = p_over_beta(cfg.budget);
        let w = WeakLifting::from_law(&law);
        let b: MonadRef = beta(cfg.budget);
        let mut groups = Vec::new();
        let mut small: Vec<(FinSet, AlgebraSpec)> = Vec::new();
        for &n in sizes {
            let x = FinSet::standard(n);
            let space = FinTopSpace::discrete(&x);
            let mut children = Vec::new();

            let algs = enumerate_algebras(&b, &x, cfg)?;
            let mut one = LawReport::pass("one β-algebra", "finite compact Hausdorff spaces are discrete", 1)
                .with_fact("algebras", algs.len());
            if algs.len() != 1 {
                one.set_fail(Witness::new(format!("{} β-algebra structures", algs.len()), Value::atom(n.to_string())));
            }
            children.push(one);
            let a = discrete_beta_structure(&space)?;

            let l = weak_lift(&law, &a)?;
            let closed = Value::set(space.closed_sets().into_iter().map(|c| x.subset_value(c)));
            let got = Value::set(l.iota.images().iter().cloned());
            let mut car = LawReport::pass("lifted carrier is the closed subsets", "VX = closed subsets, here all of PX", 1)
                .with_fact("carrier", l.algebra.carrier.len());
            if got != closed || l.algebra.carrier.len() != 1 << n {
                car.set_fail(Witness::paths("carrier differs", Value::atom(n.to_string()), got, closed));
            }
            children.push(car);

            let mut act = LawReport::pass("lifted action", "𝐅 ↦ ⋂_{𝒜 ∈ 𝐅} cl(⋃𝒜)", 0);
            let k = &l.algebra.carrier;
            let iota = l.iota.arrow();
            for big in b.obj(k)?.iter() {
                act.checked += 1;
                let lhs = l.iota.apply(&l.algebra.act(big)?)?;
                let rhs = closure_meet(&space, &b.fmap(&iota, big)?)?;
                if lhs != rhs {
                    act.set_fail(Witness::paths("ι∘action ≠ closure formula", big.clone(), lhs, rhs));
                    break;
                }
            }
            children.push(act);
            children.push(lemma3_check(&space)?);

            let mut unit = LawReport::pass("unit is singleton", "η(x) = {x}", 0);
            let nu = w.unit(&a)?;
            for p in x.iter() {
                unit.checked += 1;
                let lhs = l.iota.apply(&nu.apply(p)?)?;
                let rhs = Value::set([p.clone()]);
                if lhs != rhs {
                    unit.set_fail(Witness::paths("ι∘ν̃ ≠ singleton", p.clone(), lhs, rhs));
                    break;
                }
            }
            children.push(unit);

            if n <= 2 {
                let mut mult = LawReport::pass("multiplication is union", "μ(𝒜) = ⋃𝒜", 0);
                let ll = w.lift(&l.algebra)?;
                let om = w.mult(&a)?;
                for u in om.dom().iter() {
                    mult.checked += 1;
                    let lhs = l.iota.apply(&om.apply(u)?)?;
                    let inner = ll.iota.apply(u)?;
                    let parts = inner.expect_set()?.iter().map(|k| l.iota.apply(k)).collect::<Result<Vec<_>>>()?;
                    let rhs = Value::union_all(&parts)?;
                    if lhs != rhs {
                        mult.set_fail(Witness::paths("ι∘ω̃ ≠ union", u.clone(), lhs, rhs));
                        break;
                    }
                }
                children.push(mult);
            }
            small.push((x.clone(), a.clone()));

            let vt = vietoris_subbasis(&space);
            let lt = lawson_topology(&FinLattice::reverse_powerset(&x)?);
            let mut top = LawReport::pass("Vietoris topology is the Lawson topology", "the Vietoris topology on VX is the Lawson topology on (VX, ⊇)", 1)
                .with_fact("discrete", vt.is_discrete());
            if vt.opens_value() != lt.opens_value() {
                top.set_fail(Witness::paths("topologies differ", Value::atom(n.to_string()), vt.opens_value(), lt.opens_value()));
            }
            children.push(top);
            groups.push(LawReport::group(format!("discrete space of size {n}"), "", children).with_fact("size", n));
        }

        let mut arrows = LawReport::pass("arrows act by direct image", "Vf = direct image", 0);
        for (x, a) in &small {
            for (y, b2) in &small {
                for f in FinFn::all(x, y, &cfg.budget)? {
                    let vf = w.arrow(&f, a, b2)?;
                    let (la, lb) = (w.lift(a)?, w.lift(b2)?);
                    for k in vf.dom().iter() {
                        arrows.checked += 1;
                        let lhs = lb.iota.apply(&vf.apply(k)?)?;
                        let rhs = powerset_monad().fmap(&f.arrow(), &la.iota.apply(k)?)?;
                        if lhs != rhs && !arrows.is_fail() {
                            arrows.set_fail(Witness::paths("ι∘S̃f ≠ f[–]", Value::pair(crate::monadkit::fn_value(&f), k.clone()), lhs, rhs));
                        }
                    }
                }
            }
        }
        groups.push(arrows);

        // the lifted unit and multiplication are singleton and union, so the
        // lifted monad's axioms are those of P on the same carriers
        let laws = check_monad_laws(&powerset_monad(), sizes, cfg)?;
        groups.push(LawReport::group("lifted monad axioms", "", vec![laws]));
        Ok(LawReport::group(name, anchor, groups))
    })();
    LawReport::or_budget(name, anchor, res)
}

/// `vietoris_delta` against the law obtained from the Barr extension of
/// `β`, pointwise on `βPX`.
pub fn vietoris_delta_matches_extension(x: &FinSet, budget: Budget) -> Result<LawReport> {
    let d = vietoris_delta(x, budget)?;
    let b: MonadRef = beta(budget);
    let derived = law_from_extension("barr-beta", &barr_extension(&b), Strength::Weak);
    let mut r = LawReport::pass(format!("comprehension equals the derived law on {}", x.name()), "δ = law from the β relation lifting", 0);
    for big in d.dom().iter() {
        r.checked += 1;
        let lhs = d.apply(big)?;
        let rhs = derived.delta(x, big)?;
        if lhs != rhs {
            r.set_fail(Witness::paths("comprehension ≠ derived δ", big.clone(), lhs, rhs));
            break;
        }
    }
    Ok(r)
}

/// The composite monad of `P` over `β` against the filter monad, through
/// `S' ↦ ↑{x : η(x) ∈ S'}`; the empty set goes to the improper filter.
/// The map is checked to be a bijection commuting with units, and with
/// multiplications on carriers of at most two points.
pub fn composite_is_filter_monad(sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let name = "composite of P over β is the filter monad";
    let anchor = "the composite monad is the filter monad";
    let res = (|| -> Result<LawReport> {
        let law = p_over_beta(cfg.budget);
        let c = CompositeMonad::new(&law);
        let filt = FilterMonad::new(false, cfg.budget);
        let bm = beta(cfg.budget);
        let phi = |x: &FinSet, s: &Value| -> Result<Value> {
            let mut pts = Vec::new();
            for p in x.iter() {
                if s.contains(&bm.unit(x, p)?) {
                    pts.push(p.clone());
                }
            }
            filt.principal(x, &Value::set(pts))
        };
        let mut groups = Vec::new();
        for &n in sizes {
            let x = FinSet::standard(n);
            let cx = c.obj(&x)?;
            let fx = filt.obj(&x)?;
            let phi_x = FinFn::new(&cx, &fx, |s| phi(&x, s))?;
            let mut bij = LawReport::pass("carrier bijection", "S ↦ {A : S ⊆ A}", 1).with_fact("carrier", cx.len());
            if !(phi_x.is_injective() && phi_x.is_surjective()) {
                bij.set_fail(Witness::new("not a bijection", Value::atom(n.to_string())));
            }
            let mut unit = LawReport::pass("units correspond", "φ∘η = η", 0);
            for p in x.iter() {
                unit.checked += 1;
                let lhs = phi_x.apply(&c.unit(&x, p)?)?;
                let rhs = filt.unit(&x, p)?;
                if lhs != rhs {
                    unit.set_fail(Witness::paths("φ∘η ≠ η", p.clone(), lhs, rhs));
                    break;
                }
            }
            let mut mult = LawReport::pass("multiplications correspond", "φ∘μ = μ∘Fφ∘φ", 0);
            // β on C(C(X)) tracks families over P(β(C(X))), out of reach past two points
            if n <= 2 {
                let ccx = c.obj(&cx)?;
                let fcx = filt.obj(&cx)?;
                let phi_cx = FinFn::new(&ccx, &fcx, |s| phi(&cx, s))?;
                let pa = phi_x.arrow();
                for u in ccx.iter() {
                    mult.checked += 1;
                    let lhs = phi_x.apply(&c.mult(&x, u)?)?;
                    let rhs = filt.mult(&x, &filt.fmap(&pa, &phi_cx.apply(u)?)?)?;
                    if lhs != rhs {
                        mult.set_fail(Witness::paths("φ∘μ ≠ μ∘Fφ∘φ", u.clone(), lhs, rhs));
                        break;
                    }
                }
            }
            groups.push(LawReport::group(format!("size {n}"), "", vec![bij, unit, mult]).with_fact("size", n));
        }
        Ok(LawReport::group(name, anchor, groups))
    })();
    LawReport::or_budget(name, anchor, res)
}

/// The nonempty variant: the same comprehension with `P₊`, checked as a
/// weak law and lifted over discrete spaces. At finite scale this is only
/// evidence for the proper Vietoris monad.
pub fn nonempty_variant_demo(sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let name = "nonempty variant";
    let anchor = "P₊ over β and the proper Vietoris monad";
    let res = (|| -> Result<LawReport> {
        let law = crate::lawengine::p_plus_over_beta(cfg.budget);
        let diagrams: Vec<usize> = sizes.iter().copied().filter(|&n| n <= 2).collect();
        let mut children = vec![crate::lawengine::check_law(&law, &diagrams, cfg)?];
        for &n in sizes {
            let x = FinSet::standard(n);
            let a = discrete_beta_structure(&FinTopSpace::discrete(&x))?;
            let l = weak_lift(&law, &a)?;
            let expect = Powerset::new(PowersetKind::Nonempty, cfg.budget).obj(&x)?;
            let got = Value::set(l.iota.images().iter().cloned());
            let want = Value::set(expect.iter().cloned());
            let mut r = LawReport::pass(format!("lifted carrier on {n} points"), "nonempty closed subsets", 1)
                .with_fact("carrier", l.algebra.carrier.len());
            if got != want {
                r.set_fail(Witness::paths("lifted carrier differs", Value::atom(n.to_string()), got, want));
            }
            children.push(r);
        }
        Ok(LawReport::group(name, anchor, children)
            .with_note("finite evidence only: the infinite statement is conjectural"))
    })();
    LawReport::or_budget(name, anchor, res)
}
