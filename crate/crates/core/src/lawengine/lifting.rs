use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::finrel::{Arrow, FinFn, FinSet, Value};
use crate::lawengine::{DistLaw, Strength};
use crate::monadkit::{
    check_algebra, check_algebra_morphism, check_cases, enumerate_algebras, fn_value, mult_arrow, normalize_semialgebra,
    unit_arrow, AlgebraSpec, CheckConfig, Memo, MonadRef,
};
use crate::report::{LawReport, Witness};

/// `(SX, Sx∘δ_X)` for a T-(semi)algebra `(X, x)`.
pub fn lifting_from_law(d: &DistLaw, a: &AlgebraSpec) -> Result<AlgebraSpec> {
    let x = a.carrier.clone();
    let sx = d.s().obj(&x)?;
    let (law, act) = (d.clone(), a.action.clone());
    let action = Arrow::new(&sx, move |v| law.s().fmap(&act, &law.delta(&x, v)?));
    Ok(AlgebraSpec::new(d.t(), &sx, action))
}

/// A lifted T-algebra `K` with its section `ι: K → SX` and retraction
/// `π: SX → K` of the semialgebra `(SX, Sx∘δ_X)`.
#[derive(Clone, Debug)]
pub struct Lifted {
    pub base: AlgebraSpec,
    pub semialgebra: AlgebraSpec,
    pub algebra: AlgebraSpec,
    pub iota: FinFn,
    pub pi: FinFn,
}

/// Splits `Sx∘δ_X∘η_{SX}` on the semialgebra `(SX, Sx∘δ_X)`.
pub fn weak_lift(d: &DistLaw, a: &AlgebraSpec) -> Result<Lifted> {
    let semi = lifting_from_law(d, a)?;
    let n = normalize_semialgebra(&semi)?;
    Ok(Lifted {
        base: a.clone(),
        semialgebra: semi,
        algebra: n.algebra,
        iota: n.i,
        pi: n.p,
    })
}

type LiftFn = Arc<dyn Fn(&AlgebraSpec) -> Result<Lifted> + Send + Sync>;

/// A weak lifting of `S` to T-algebras, given by its object map. Unit,
/// multiplication and arrows are derived from `ι` and `π`.
pub struct WeakLifting {
    name: String,
    s: MonadRef,
    t: MonadRef,
    lift_fn: LiftFn,
    // keyed by carrier fingerprint and action identity; the stored spec
    // keeps the action alive so the key is never reused
    cache: Mutex<HashMap<(u64, usize), Vec<(AlgebraSpec, Lifted)>>>,
}

impl WeakLifting {
    pub fn from_law(d: &DistLaw) -> WeakLifting {
        let law = d.clone();
        WeakLifting::with_obj(d.name(), d.s(), d.t(), move |a| weak_lift(&law, a))
    }

    pub fn with_obj(
        name: &str,
        s: &MonadRef,
        t: &MonadRef,
        lift: impl Fn(&AlgebraSpec) -> Result<Lifted> + Send + Sync + 'static,
    ) -> WeakLifting {
        WeakLifting {
            name: name.to_string(),
            s: s.clone(),
            t: t.clone(),
            lift_fn: Arc::new(lift),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn s(&self) -> &MonadRef {
        &self.s
    }

    pub fn t(&self) -> &MonadRef {
        &self.t
    }

    pub fn lift(&self, a: &AlgebraSpec) -> Result<Lifted> {
        let key = (a.carrier.fingerprint(), a.action.id());
        if let Some(hit) = self.lookup(key, a) {
            return Ok(hit);
        }
        let l = (self.lift_fn)(a)?;
        let mut cache = self.cache.lock().expect("lifting cache");
        cache.entry(key).or_default().push((a.clone(), l.clone()));
        Ok(l)
    }

    fn lookup(&self, key: (u64, usize), a: &AlgebraSpec) -> Option<Lifted> {
        let cache = self.cache.lock().expect("lifting cache");
        cache
            .get(&key)?
            .iter()
            .find(|(b, _)| b.carrier == a.carrier && b.action.id() == a.action.id())
            .map(|(_, l)| l.clone())
    }

    /// The lifted algebra `S̃(X, x)`.
    pub fn obj(&self, a: &AlgebraSpec) -> Result<AlgebraSpec> {
        Ok(self.lift(a)?.algebra)
    }

    /// `S̃f = π_b∘Sf∘ι_a` for an algebra map `f: a → b`.
    pub fn arrow(&self, f: &FinFn, a: &AlgebraSpec, b: &AlgebraSpec) -> Result<FinFn> {
        let (la, lb) = (self.lift(a)?, self.lift(b)?);
        let fa = f.arrow();
        FinFn::new(la.iota.dom(), lb.pi.cod(), |k| lb.pi.apply(&self.s.fmap(&fa, &la.iota.apply(k)?)?))
    }

    /// `ν̃ = π∘ν_X`.
    pub fn unit(&self, a: &AlgebraSpec) -> Result<FinFn> {
        let l = self.lift(a)?;
        let nu = unit_arrow(&self.s, &a.carrier)?;
        FinFn::new(&a.carrier, l.pi.cod(), |v| l.pi.apply(&nu.apply(v)?))
    }

    /// `ω̃ = π∘ω_X∘Sι∘ι'`, where `ι'` belongs to the lift of `S̃(X, x)`.
    pub fn mult(&self, a: &AlgebraSpec) -> Result<FinFn> {
        let l = self.lift(a)?;
        let ll = self.lift(&l.algebra)?;
        let omega = mult_arrow(&self.s, &a.carrier)?;
        let iota = l.iota.arrow();
        FinFn::new(ll.iota.dom(), l.pi.cod(), |u| {
            l.pi.apply(&omega.apply(&self.s.fmap(&iota, &ll.iota.apply(u)?)?)?)
        })
    }
}

/// `δ_X = ι∘y∘Tπ∘TSη_X`, with `(y, ι, π)` the lift of the free algebra
/// `(TX, μ_X)`.
pub fn law_from_lifting(w: &Arc<WeakLifting>, strength: Strength) -> DistLaw {
    let memo: Arc<Memo<Lifted>> = Arc::new(Memo::default());
    let lifting = w.clone();
    let (s, t) = (w.s().clone(), w.t().clone());
    DistLaw::new(
        w.name(),
        w.s(),
        w.t(),
        strength,
        Arc::new(move |x, v| {
            let free = memo.get_or_try(x, || {
                let tx = t.obj(x)?;
                lifting.lift(&AlgebraSpec::new(&t, &tx, mult_arrow(&t, x)?))
            })?;
            let eta = unit_arrow(&t, x)?;
            let s2 = s.clone();
            let s_eta = Arrow::new(free.pi.dom(), move |u| s2.fmap(&eta, u));
            let tsteta = t.fmap(&s_eta, v)?;
            let tpi = t.fmap(&free.pi.arrow(), &tsteta)?;
            free.iota.apply(&free.algebra.act(&tpi)?)
        }),
    )
}

fn algebra_value(a: &AlgebraSpec) -> Result<Value> {
    Ok(fn_value(&a.table()?))
}

fn first_witness(r: &LawReport) -> Option<Witness> {
    r.first_failure().and_then(|f| f.witness.clone())
}

fn fails_at<'a>(f: &FinFn, g: &FinFn, dom: impl IntoIterator<Item = &'a Value>) -> Result<Option<(Value, Value, Value)>> {
    for v in dom {
        let (l, r) = (f.apply(v)?, g.apply(v)?);
        if l != r {
            return Ok(Some((v.clone(), l, r)));
        }
    }
    Ok(None)
}

/// A witness input pairing the algebra with the offending element.
fn at(a: &AlgebraSpec, v: Value) -> Result<Value> {
    Ok(Value::pair(algebra_value(a)?, v))
}

/// `πι = 1`, the lifted carriers are T-algebras with `ι`, `π` semialgebra
/// maps, both unit triangles and both multiplication rectangles commute,
/// and `ν̃`, `ω̃` are the only maps that make them commute. Evaluated at
/// every T-algebra on the standard carriers of the given sizes.
pub fn check_weak_lifting_data(w: &WeakLifting, sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let mut algebras = Vec::new();
    for &n in sizes {
        match enumerate_algebras(w.t(), &FinSet::standard(n), cfg) {
            Ok(v) => algebras.extend(v),
            Err(e) if e.is_budget() => {
                return Ok(LawReport::budget_exceeded(format!("weak lifting data: {}", w.name()), "", &e))
            }
            Err(e) => return Err(e),
        }
    }
    check_weak_lifting_on(w, &algebras, cfg)
}

pub fn check_weak_lifting_on(w: &WeakLifting, algebras: &[AlgebraSpec], cfg: &CheckConfig) -> Result<LawReport> {
    let s = w.s();
    let mut checks = Vec::new();

    checks.push(check_cases("retraction πι = 1", "πι = 1", algebras, &|a| {
        let l = w.lift(a)?;
        let pi_iota = l.iota.then(&l.pi)?;
        Ok(fails_at(&pi_iota, &FinFn::identity(l.iota.dom()), l.iota.dom().iter())?
            .map(|(v, lv, rv)| Witness::paths("πι = 1", v, lv, rv)))
    })?);

    checks.push(check_cases("lifted carrier is a T-algebra", "x∘η = 1 and x∘Tx = x∘μ", algebras, &|a| {
        let l = w.lift(a)?;
        let r = check_algebra(&l.algebra, true, cfg)?;
        let tag = algebra_value(a)?;
        Ok(first_witness(&r).map(|wit| Witness {
            input: Value::pair(tag, wit.input.clone()),
            ..wit
        }))
    })?);

    checks.push(check_cases("ι and π are semialgebra maps", "y∘Tf = f∘x", algebras, &|a| {
        let l = w.lift(a)?;
        if !check_algebra_morphism(&l.iota, &l.algebra, &l.semialgebra)? {
            return Ok(Some(Witness::new("ι is not a semialgebra map", algebra_value(a)?)));
        }
        if !check_algebra_morphism(&l.pi, &l.semialgebra, &l.algebra)? {
            return Ok(Some(Witness::new("π is not a semialgebra map", algebra_value(a)?)));
        }
        Ok(None)
    })?);

    checks.push(check_cases("unit triangle ιν̃ = ν", "ι∘ν̃ = νU", algebras, &|a| {
        let l = w.lift(a)?;
        let lhs = w.unit(a)?.then(&l.iota)?;
        let nu = unit_arrow(s, &a.carrier)?.tabulate(&a.carrier)?;
        let tag = algebra_value(a)?;
        Ok(fails_at(&lhs, &nu, a.carrier.iter())?.map(|(v, lv, rv)| Witness::paths("ι∘ν̃ = ν", Value::pair(tag, v), lv, rv)))
    })?);

    checks.push(check_cases("unit triangle πν = ν̃", "π∘νU = ν̃", algebras, &|a| {
        let l = w.lift(a)?;
        let nu = unit_arrow(s, &a.carrier)?.tabulate(&a.carrier)?;
        let lhs = nu.then(&l.pi)?;
        let tag = algebra_value(a)?;
        Ok(fails_at(&lhs, &w.unit(a)?, a.carrier.iter())?.map(|(v, lv, rv)| Witness::paths("π∘ν = ν̃", Value::pair(tag, v), lv, rv)))
    })?);

    checks.push(check_cases("multiplication rectangle ιω̃ = ωSι ι'", "ι∘ω̃ = ω∘Sι∘ιS̃", algebras, &|a| {
        let l = w.lift(a)?;
        let ll = w.lift(&l.algebra)?;
        let omega = mult_arrow(s, &a.carrier)?;
        let iota = l.iota.arrow();
        let mult = w.mult(a)?;
        for u in ll.iota.dom().iter() {
            let lhs = l.iota.apply(&mult.apply(u)?)?;
            let rhs = omega.apply(&s.fmap(&iota, &ll.iota.apply(u)?)?)?;
            if lhs != rhs {
                return Ok(Some(Witness::paths("ι∘ω̃ = ω∘Sι∘ι'", at(a, u.clone())?, lhs, rhs)));
            }
        }
        Ok(None)
    })?);

    checks.push(check_cases("multiplication rectangle πω = ω̃π' Sπ", "π∘ω = ω̃∘πS̃∘Sπ", algebras, &|a| {
        let l = w.lift(a)?;
        let ll = w.lift(&l.algebra)?;
        let sx = s.obj(&a.carrier)?;
        let ssx = s.obj(&sx)?;
        let omega = mult_arrow(s, &a.carrier)?;
        let pi = l.pi.arrow();
        let mult = w.mult(a)?;
        for v in ssx.iter() {
            let lhs = l.pi.apply(&omega.apply(v)?)?;
            let rhs = mult.apply(&ll.pi.apply(&s.fmap(&pi, v)?)?)?;
            if lhs != rhs {
                return Ok(Some(Witness::paths("π∘ω = ω̃∘π'∘Sπ", at(a, v.clone())?, lhs, rhs)));
            }
        }
        Ok(None)
    })?);

    checks.push(check_cases("uniqueness of ν̃ and ω̃", "unique maps making the diagrams commute", algebras, &|a| {
        uniqueness_witness(w, a)
    })?);

    let mut top = LawReport::group(format!("weak lifting data: {}", w.name()), "πι = 1 and the four diagrams", checks)
        .with_fact("algebras", algebras.len());
    if algebras.is_empty() {
        top.note("no T-algebras on the tested carriers");
    }
    Ok(top)
}

/// Counts, pointwise, the maps that make both unit triangles (resp. both
/// multiplication rectangles) commute; each count must be exactly one.
fn uniqueness_witness(w: &WeakLifting, a: &AlgebraSpec) -> Result<Option<Witness>> {
    let s = w.s();
    let l = w.lift(a)?;
    let k = l.iota.dom();
    let nu = unit_arrow(s, &a.carrier)?;
    for x in a.carrier.iter() {
        let target = nu.apply(x)?;
        let fixed = l.pi.apply(&target)?;
        let count = k.iter().filter(|c| l.iota.apply(c).ok() == Some(target.clone()) && **c == fixed).count();
        if count != 1 {
            return Ok(Some(Witness::new(format!("{count} candidates for ν̃"), at(a, x.clone())?)));
        }
    }
    let ll = w.lift(&l.algebra)?;
    let omega = mult_arrow(s, &a.carrier)?;
    let iota = l.iota.arrow();
    let sx = s.obj(&a.carrier)?;
    let ssx = s.obj(&sx)?;
    let pi = l.pi.arrow();
    // the rectangle through π constrains ω̃ on the image of π'∘Sπ
    let mut forced: HashMap<Value, Vec<Value>> = HashMap::new();
    for v in ssx.iter() {
        let u = ll.pi.apply(&s.fmap(&pi, v)?)?;
        forced.entry(u).or_default().push(l.pi.apply(&omega.apply(v)?)?);
    }
    for u in ll.iota.dom().iter() {
        let target = omega.apply(&s.fmap(&iota, &ll.iota.apply(u)?)?)?;
        let need = forced.get(u).cloned().unwrap_or_default();
        let count = k
            .iter()
            .filter(|c| l.iota.apply(c).ok() == Some(target.clone()) && need.iter().all(|n| n == *c))
            .count();
        if count != 1 {
            return Ok(Some(Witness::new(format!("{count} candidates for ω̃"), at(a, u.clone())?)));
        }
    }
    Ok(None)
}

impl std::fmt::Debug for WeakLifting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WeakLifting({})", self.name)
    }
}

/// Replaces the retraction of every lift by `π` followed by a swap of its
/// first two outputs. Used to exercise the checker.
pub fn corrupt_pi(w: Arc<WeakLifting>) -> WeakLifting {
    let inner = w.clone();
    WeakLifting::with_obj(&format!("{} (corrupted π)", w.name()), w.s(), w.t(), move |a| {
        let mut l = inner.lift(a)?;
        let k = l.pi.cod().clone();
        if k.len() < 2 {
            return Err(Error::InvalidStructure("lifted carrier too small to corrupt".into()));
        }
        let (p, q) = (k.elements()[0].clone(), k.elements()[1].clone());
        let imgs = l
            .pi
            .images()
            .iter()
            .map(|v| if *v == p { q.clone() } else if *v == q { p.clone() } else { v.clone() })
            .collect();
        l.pi = FinFn::from_images(l.pi.dom(), &k, imgs)?;
        Ok(l)
    })
}
