use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Result;
use crate::finrel::{FinFn, FinSet, Value};
use crate::lawengine::{CompositeMonad, DistLaw, WeakLifting};
use crate::monadkit::{
    check_algebra_morphism, check_pointwise, enumerate_algebras, enumerate_algebras_with, functor_of, unit_arrow,
    AlgebraSpec, CheckConfig, Domain, MonadRef,
};
use crate::report::{LawReport, Status, Witness};

/// A carrier with a T-algebra structure `t` and an S-algebra structure `s`.
#[derive(Clone, Debug)]
pub struct DeltaAlgebra {
    pub carrier: FinSet,
    pub t_action: FinFn,
    pub s_action: FinFn,
}

impl DeltaAlgebra {
    pub fn new(t_action: &FinFn, s_action: &FinFn) -> Result<DeltaAlgebra> {
        t_action.cod().require_same(s_action.cod(), "δ-algebra carriers")?;
        Ok(DeltaAlgebra {
            carrier: t_action.cod().clone(),
            t_action: t_action.clone(),
            s_action: s_action.clone(),
        })
    }

    pub fn t_algebra(&self, t: &MonadRef) -> Result<AlgebraSpec> {
        AlgebraSpec::from_fn(t, &self.t_action)
    }

    pub fn s_algebra(&self, s: &MonadRef) -> Result<AlgebraSpec> {
        AlgebraSpec::from_fn(s, &self.s_action)
    }
}

const NAME: &str = "δ-algebra square";
const ANCHOR: &str = "s∘St∘δ_X = t∘Ts";

/// Evaluates `s∘St∘δ_X = t∘Ts` on `TSX`. When `TSX` is too large, the
/// elements of `T` built from at most three members come first, in order
/// of size, followed by a seeded sample.
pub fn check_delta_algebra(d: &DistLaw, a: &DeltaAlgebra, cfg: &CheckConfig) -> Result<LawReport> {
    let (s, t) = (d.s(), d.t());
    let x = &a.carrier;
    let st = a.t_action.arrow();
    let ts = a.s_action.arrow();
    let upper = |v: &Value| a.s_action.apply(&s.fmap(&st, &d.delta(x, v)?)?);
    let lower = |v: &Value| a.t_action.apply(&t.fmap(&ts, v)?);
    let sx = s.obj(x)?;
    let dom = Domain::over(&functor_of(t), &sx, &cfg.budget)?;
    if dom.is_exhaustive() {
        return check_pointwise(NAME, ANCHOR, &dom, cfg, &upper, &lower);
    }
    let mut children = Vec::new();
    if let Some(small) = t.small_elements(&sx, 3) {
        let mut small = small?;
        small.sort_by(|p, q| (p.weight(), p).cmp(&(q.weight(), q)));
        children.push(check_listed(&small, &upper, &lower)?);
    }
    children.push(check_pointwise(&format!("{NAME}, sampled"), ANCHOR, &dom, cfg, &upper, &lower)?);
    Ok(LawReport::group(NAME, ANCHOR, children))
}

// like check_pointwise over an explicit list, keeping list order for the witness
fn check_listed(
    elems: &[Value],
    upper: &(dyn Fn(&Value) -> Result<Value> + Sync),
    lower: &(dyn Fn(&Value) -> Result<Value> + Sync),
) -> Result<LawReport> {
    let name = format!("{NAME}, small elements");
    crate::monadkit::check_cases(&name, ANCHOR, elems, &|v| {
        let (l, r) = (upper(v)?, lower(v)?);
        Ok((l != r).then(|| Witness::paths(NAME, v.clone(), l, r)))
    })
}

/// The three presentations of algebras on one carrier.
struct Presentations {
    delta: Vec<DeltaAlgebra>,
    lifted: Vec<(AlgebraSpec, FinFn)>,
    composite: Vec<AlgebraSpec>,
    composite_exhaustive: bool,
}

fn key(f: &FinFn) -> Vec<Value> {
    f.images().to_vec()
}

fn delta_algebras(d: &DistLaw, x: &FinSet, cfg: &CheckConfig) -> Result<(Vec<DeltaAlgebra>, bool)> {
    let ts = enumerate_algebras(d.t(), x, cfg)?;
    let ss = enumerate_algebras(d.s(), x, cfg)?;
    let mut out = Vec::new();
    let mut exhaustive = true;
    for ta in &ts {
        for sa in &ss {
            let a = DeltaAlgebra::new(&ta.table()?, &sa.table()?)?;
            let r = check_delta_algebra(d, &a, cfg)?;
            match r.status {
                Status::Pass => out.push(a),
                Status::SampledPass => {
                    exhaustive = false;
                    out.push(a)
                }
                _ => {}
            }
        }
    }
    Ok((out, exhaustive))
}

/// Algebras `h: S̃(X, x) → (X, x)` of the lifted monad, over every
/// T-algebra `(X, x)`.
fn lifted_algebras(w: &WeakLifting, x: &FinSet, cfg: &CheckConfig) -> Result<Vec<(AlgebraSpec, FinFn)>> {
    let mut out = Vec::new();
    for a in enumerate_algebras(w.t(), x, cfg)? {
        let l = w.lift(&a)?;
        let k = &l.algebra.carrier;
        let unit = w.unit(&a)?;
        // h∘ν̃ = 1 fixes h on the image of ν̃
        let mut forced: HashMap<Value, Value> = HashMap::new();
        let mut clash = false;
        for v in x.iter() {
            let u = unit.apply(v)?;
            if forced.insert(u, v.clone()).is_some_and(|old| old != *v) {
                clash = true;
            }
        }
        if clash {
            continue;
        }
        let free: Vec<&Value> = k.iter().filter(|u| !forced.contains_key(*u)).collect();
        let count = (x.len() as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
        cfg.budget.check(|| format!("candidate lifted actions on {}", x.name()), count)?;
        let mult = w.mult(&a)?;
        for code in 0..count as u64 {
            let mut table = forced.clone();
            let mut c = code;
            for u in free.iter().rev() {
                table.insert((*u).clone(), x.elements()[(c % x.len() as u64) as usize].clone());
                c /= x.len() as u64;
            }
            let h = FinFn::new(k, x, |u| Ok(table[u].clone()))?;
            if !check_algebra_morphism(&h, &l.algebra, &a)? {
                continue;
            }
            let sh = w.arrow(&h, &l.algebra, &a)?;
            let assoc = mult.dom().iter().try_fold(true, |ok, u| -> Result<bool> {
                Ok(ok && h.apply(&sh.apply(u)?)? == h.apply(&mult.apply(u)?)?)
            })?;
            if assoc {
                out.push((a.clone(), h));
            }
        }
    }
    Ok(out)
}

fn presentations(d: &DistLaw, w: &WeakLifting, c: &MonadRef, x: &FinSet, cfg: &CheckConfig) -> Result<(Presentations, bool)> {
    let (delta, delta_exhaustive) = delta_algebras(d, x, cfg)?;
    let lifted = lifted_algebras(w, x, cfg)?;
    let cx = c.obj(x)?;
    let dom = Domain::over(&functor_of(c), &cx, &cfg.budget)?;
    let (composite, composite_exhaustive) = enumerate_algebras_with(c, x, &dom, cfg)?;
    Ok((
        Presentations {
            delta,
            lifted,
            composite,
            composite_exhaustive,
        },
        delta_exhaustive,
    ))
}

/// `s∘ι`, the lifted action of a δ-algebra.
fn to_lifted(w: &WeakLifting, t: &MonadRef, a: &DeltaAlgebra) -> Result<(AlgebraSpec, FinFn)> {
    let ta = a.t_algebra(t)?;
    let l = w.lift(&ta)?;
    Ok((ta, l.iota.then(&a.s_action)?))
}

/// `h∘π`, back from a lifted algebra.
fn from_lifted(w: &WeakLifting, ta: &AlgebraSpec, h: &FinFn) -> Result<DeltaAlgebra> {
    let l = w.lift(ta)?;
    DeltaAlgebra::new(&ta.table()?, &l.pi.then(h)?)
}

/// `s∘St` on the composite carrier.
fn to_composite(d: &DistLaw, c: &MonadRef, a: &DeltaAlgebra) -> Result<AlgebraSpec> {
    let cx = c.obj(&a.carrier)?;
    let st = a.t_action.arrow();
    let act = FinFn::new(&cx, &a.carrier, |v| a.s_action.apply(&d.s().fmap(&st, v)?))?;
    AlgebraSpec::from_fn(c, &act)
}

/// `t = c∘e∘ν_{TX}` and `s = c∘e∘Sη_X`.
fn from_composite(d: &DistLaw, comp: &CompositeMonad, ca: &AlgebraSpec) -> Result<DeltaAlgebra> {
    let (s, t) = (d.s(), d.t());
    let x = &ca.carrier;
    let tx = t.obj(x)?;
    let sx = s.obj(x)?;
    let nu = unit_arrow(s, &tx)?;
    let eta = unit_arrow(t, x)?;
    let ta = FinFn::new(&tx, x, |v| ca.act(&comp.idempotent(x, &nu.apply(v)?)?))?;
    let sa = FinFn::new(&sx, x, |v| ca.act(&comp.idempotent(x, &s.fmap(&eta, v)?)?))?;
    DeltaAlgebra::new(&ta, &sa)
}

fn delta_key(a: &DeltaAlgebra) -> (Vec<Value>, Vec<Value>) {
    (key(&a.t_action), key(&a.s_action))
}

/// Enumerates algebras of the lifted monad, of the composite monad and
/// δ-algebras on each carrier, and checks that the canonical maps between
/// them are mutually inverse bijections. Morphisms are compared on
/// carriers of at most two points.
pub fn check_equivalences(d: &DistLaw, sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let name = format!("algebra equivalences: {}", d.name());
    let anchor = "lifted algebras ≅ composite algebras ≅ δ-algebras";
    let res = (|| -> Result<LawReport> {
        let w = WeakLifting::from_law(d);
        let comp = Arc::new(CompositeMonad::new(d));
        let c: MonadRef = comp.clone();
        let mut groups = Vec::new();
        let mut small: Vec<(FinSet, Presentations)> = Vec::new();
        for &n in sizes {
            let x = FinSet::standard(n);
            let (p, delta_exhaustive) = presentations(d, &w, &c, &x, cfg)?;
            let mut children = Vec::new();

            let mut counts = LawReport::pass("counts agree", "equal numbers of algebras", 1);
            counts.set_fact("delta", p.delta.len());
            counts.set_fact("lifted", p.lifted.len());
            counts.set_fact("composite", p.composite.len());
            if p.delta.len() != p.lifted.len() || p.delta.len() != p.composite.len() {
                counts.set_fail(Witness::new(
                    format!("δ {} / lifted {} / composite {}", p.delta.len(), p.lifted.len(), p.composite.len()),
                    Value::atom(n.to_string()),
                ));
            }
            children.push(counts);

            children.push(bijection(
                "δ-algebras ↔ lifted algebras",
                &p.delta,
                &p.lifted,
                |a| {
                    let (ta, h) = to_lifted(&w, d.t(), a)?;
                    Ok((key(&ta.table()?), key(&h)))
                },
                |(ta, h)| Ok((key(&ta.table()?), key(h))),
                |(ta, h)| from_lifted(&w, ta, h),
            )?);
            children.push(bijection(
                "δ-algebras ↔ composite algebras",
                &p.delta,
                &p.composite,
                |a| Ok((key(&to_composite(d, &c, a)?.table()?), vec![])),
                |ca| Ok((key(&ca.table()?), vec![])),
                |ca| from_composite(d, &comp, ca),
            )?);

            let mut g = LawReport::group(format!("carrier of size {n}"), "", children).with_fact("size", n);
            if !p.composite_exhaustive || !delta_exhaustive {
                if g.status == Status::Pass {
                    g.status = Status::SampledPass;
                }
                g.seed = Some(cfg.seed);
                if !p.composite_exhaustive {
                    g.note("composite associativity checked on a seeded sample of the double composite");
                }
                if !delta_exhaustive {
                    g.note("δ-algebra squares checked on small elements and a seeded sample");
                }
            }
            groups.push(g);
            if n <= 2 {
                small.push((x, p));
            }
        }
        groups.push(morphisms(d, &w, &comp, &small)?);
        Ok(LawReport::group(name.clone(), anchor, groups))
    })();
    LawReport::or_budget(&name, anchor, res)
}

type Key = (Vec<Value>, Vec<Value>);

/// Sends every δ-algebra forward, checks the images are distinct and
/// cover `other`, and that the backward map undoes the forward one.
fn bijection<B>(
    name: &str,
    delta: &[DeltaAlgebra],
    other: &[B],
    forward: impl Fn(&DeltaAlgebra) -> Result<Key>,
    other_key: impl Fn(&B) -> Result<Key>,
    backward: impl Fn(&B) -> Result<DeltaAlgebra>,
) -> Result<LawReport> {
    let anchor = "canonical maps are mutually inverse";
    let index: HashMap<Key, usize> =
        other.iter().enumerate().map(|(i, b)| Ok((other_key(b)?, i))).collect::<Result<_>>()?;
    let mut hit = vec![false; other.len()];
    for a in delta {
        let k = forward(a)?;
        let Some(&i) = index.get(&k) else {
            return Ok(LawReport::fail(name, anchor, 0, Witness::new("image is not an algebra", fn_pair(a))));
        };
        if hit[i] {
            return Ok(LawReport::fail(name, anchor, 0, Witness::new("two δ-algebras share an image", fn_pair(a))));
        }
        hit[i] = true;
        let back = backward(&other[i])?;
        if delta_key(&back) != delta_key(a) {
            return Ok(LawReport::fail(name, anchor, 0, Witness::new("round trip changes the algebra", fn_pair(a))));
        }
    }
    if let Some(i) = hit.iter().position(|h| !h) {
        let back = backward(&other[i])?;
        return Ok(LawReport::fail(name, anchor, 0, Witness::new("algebra missed by the canonical map", fn_pair(&back))));
    }
    Ok(LawReport::pass(name, anchor, delta.len() as u64))
}

fn fn_pair(a: &DeltaAlgebra) -> Value {
    use crate::monadkit::fn_value;
    Value::pair(fn_value(&a.t_action), fn_value(&a.s_action))
}

/// Compares hom-sets: `f` is a δ-algebra map iff it is a lifted-algebra
/// map iff it is a composite-algebra map.
fn morphisms(
    d: &DistLaw,
    w: &WeakLifting,
    comp: &Arc<CompositeMonad>,
    small: &[(FinSet, Presentations)],
) -> Result<LawReport> {
    let name = "morphisms correspond";
    let anchor = "hom-sets agree under the canonical maps";
    let c: MonadRef = comp.clone();
    let mut checked = 0;
    for (x, px) in small {
        for (y, py) in small {
            let fns = FinFn::all(x, y, &d.budget())?;
            for a in &px.delta {
                for b in &py.delta {
                    let (la, lb) = (to_lifted(w, d.t(), a)?, to_lifted(w, d.t(), b)?);
                    let (ca, cb) = (to_composite(d, &c, a)?, to_composite(d, &c, b)?);
                    for f in &fns {
                        let plain = check_algebra_morphism(f, &a.t_algebra(d.t())?, &b.t_algebra(d.t())?)?
                            && check_algebra_morphism(f, &a.s_algebra(d.s())?, &b.s_algebra(d.s())?)?;
                        let lifted = check_algebra_morphism(f, &la.0, &lb.0)? && {
                            let sf = w.arrow(f, &la.0, &lb.0)?;
                            let mut ok = true;
                            for u in la.1.dom().iter() {
                                if lb.1.apply(&sf.apply(u)?)? != f.apply(&la.1.apply(u)?)? {
                                    ok = false;
                                    break;
                                }
                            }
                            ok
                        };
                        let composite = {
                            let cf = f.arrow();
                            let cx = c.obj(x)?;
                            let mut ok = true;
                            for v in cx.iter() {
                                if cb.act(&c.fmap(&cf, v)?)? != f.apply(&ca.act(v)?)? {
                                    ok = false;
                                    break;
                                }
                            }
                            ok
                        };
                        checked += 1;
                        if plain != lifted || plain != composite {
                            let input = Value::pair(fn_pair(a), Value::pair(fn_pair(b), crate::monadkit::fn_value(f)));
                            return Ok(LawReport::fail(
                                name,
                                anchor,
                                checked,
                                Witness::new(format!("δ {plain}, lifted {lifted}, composite {composite}"), input),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(LawReport::pass(name, anchor, checked))
}

