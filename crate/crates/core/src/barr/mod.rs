//! Extending set functors to relations, and deciding weak cartesianness
//! on small carriers.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Budget, Error, Result};
use crate::finrel::{pullback, weak_pullback_gap, Arrow, FinFn, FinRel, FinSet, Square, Value};
use crate::monadkit::{
    check_cases, compose, fmap_fn, fn_value, functor_of, mult_arrow, unit_arrow, CheckConfig, Functor, FunctorRef,
    MonadRef,
};
use crate::report::{LawReport, Witness};
use crate::zoo::{FilterMonad, Identity, Powerset, PowersetKind};

/// A relation encoded as the set of its pairs.
pub fn rel_value(r: &FinRel) -> Value {
    Value::set(r.pairs().iter().map(|(a, b)| Value::pair(a.clone(), b.clone())))
}

/// `F̃(R) = (Fq)_*(Fp)^*` for the tabulation `X <-p- R -q-> Y`.
pub fn barr_lift(f: &FunctorRef, r: &FinRel) -> Result<FinRel> {
    let (p, q) = r.tabulate();
    let fp = fmap_fn(f, &p)?;
    let fq = fmap_fn(f, &q)?;
    let pairs = fp
        .pairs()
        .map(|(w, a)| Ok((a.clone(), fq.apply(w)?)))
        .collect::<Result<Vec<_>>>()?;
    FinRel::new(&f.obj(r.dom())?, &f.obj(r.cod())?, pairs)
}

/// `A R̃ B` iff every point of `A` is related to some point of `B` and
/// every point of `B` to some point of `A`.
pub fn egli_milner(r: &FinRel) -> Result<FinRel> {
    let pf = Powerset::new(PowersetKind::Finite, Budget::default());
    let fx = pf.obj(r.dom())?;
    let fy = pf.obj(r.cod())?;
    FinRel::from_predicate(&fx, &fy, |a, b| {
        let (a, b) = (a.expect_set()?, b.expect_set()?);
        Ok(a.iter().all(|x| b.iter().any(|y| r.related(x, y))) && b.iter().all(|y| a.iter().any(|x| r.related(x, y))))
    })
}

/// `𝓕 R̃ 𝓖` iff `R(A) ∈ 𝓖` for every `A ∈ 𝓕`.
pub fn beta_lift(r: &FinRel) -> Result<FinRel> {
    let beta = FilterMonad::new(true, Budget::default());
    let bx = beta.obj(r.dom())?;
    let by = beta.obj(r.cod())?;
    FinRel::from_predicate(&bx, &by, |f, g| {
        for a in f.expect_set()? {
            if !g.contains(&r.image_of_set(a)?) {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

/// The constant functor at `k`.
pub struct ConstantFunctor {
    k: FinSet,
    budget: Budget,
}

impl ConstantFunctor {
    pub fn new(k: &FinSet, budget: Budget) -> ConstantFunctor {
        ConstantFunctor { k: k.clone(), budget }
    }
}

impl Functor for ConstantFunctor {
    fn name(&self) -> String {
        format!("constant({})", self.k.len())
    }

    fn size_hint(&self, _n: usize) -> Option<u128> {
        Some(self.k.len() as u128)
    }

    fn obj(&self, _x: &FinSet) -> Result<FinSet> {
        Ok(self.k.clone())
    }

    fn fmap(&self, _f: &Arrow, t: &Value) -> Result<Value> {
        Ok(t.clone())
    }

    fn sample(&self, _x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value> {
        if self.k.is_empty() {
            return Err(Error::InvalidStructure("constant functor at ∅".into()));
        }
        Ok(self.k.elements()[rng.gen_range(0..self.k.len())].clone())
    }

    fn budget(&self) -> Budget {
        self.budget
    }
}

/// Sends `∅` to a point and every nonempty set to two points; arrows act
/// as inclusions. It does not preserve the empty pullback of two points
/// with disjoint images.
pub struct EmptinessFunctor {
    budget: Budget,
}

impl EmptinessFunctor {
    pub fn new(budget: Budget) -> EmptinessFunctor {
        EmptinessFunctor { budget }
    }
}

impl Functor for EmptinessFunctor {
    fn name(&self) -> String {
        "emptiness".to_string()
    }

    fn size_hint(&self, n: usize) -> Option<u128> {
        Some(if n == 0 { 1 } else { 2 })
    }

    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        Ok(FinSet::standard(if x.is_empty() { 1 } else { 2 }))
    }

    fn fmap(&self, _f: &Arrow, t: &Value) -> Result<Value> {
        Ok(t.clone())
    }

    fn sample(&self, x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value> {
        let k = if x.is_empty() { 1 } else { 2 };
        Ok(Value::atom(rng.gen_range(0..k).to_string()))
    }

    fn budget(&self) -> Budget {
        self.budget
    }
}

fn carriers(n: usize) -> Vec<FinSet> {
    (0..=n).map(FinSet::standard).collect()
}

fn all_fns(n: usize, budget: &Budget) -> Result<Vec<FinFn>> {
    let cs = carriers(n);
    let mut out = Vec::new();
    for a in &cs {
        for b in &cs {
            out.extend(FinFn::all(a, b, budget)?);
        }
    }
    Ok(out)
}

struct Cospan {
    g: FinFn,
    h: FinFn,
    /// Index of a pullback point to duplicate in the apex.
    dup: Option<usize>,
}

fn weak_pullback_square(c: &Cospan) -> Result<Square> {
    let pb = pullback(&c.g, &c.h)?;
    let mut pts = pb.elements().to_vec();
    if let Some(k) = c.dup {
        pts.push(Value::pair(pb.elements()[k].clone(), Value::atom("dup")));
    }
    let apex = FinSet::new(format!("W{}", pts.len()), pts);
    let base = |w: &Value| -> Value {
        match w.as_pair() {
            Some((p, tag)) if tag.as_atom() == Some("dup") => p.clone(),
            _ => w.clone(),
        }
    };
    let top = FinFn::new(&apex, c.g.dom(), |w| Ok(base(w).as_pair().expect("pullback point").0.clone()))?;
    let left = FinFn::new(&apex, c.h.dom(), |w| Ok(base(w).as_pair().expect("pullback point").1.clone()))?;
    Square::new(top, left, c.g.clone(), c.h.clone())
}

/// Applies `f` to every generated weak pullback over cospans of carriers of
/// size at most `n` (the pullback itself and each one-point duplication)
/// and checks the image is still a weak pullback.
pub fn check_weakly_cartesian_functor(f: &FunctorRef, n: usize, cfg: &CheckConfig) -> Result<LawReport> {
    let cs = carriers(n);
    let mut cases = Vec::new();
    for z in &cs {
        for x in &cs {
            for y in &cs {
                for g in FinFn::all(x, z, &cfg.budget)? {
                    for h in FinFn::all(y, z, &cfg.budget)? {
                        let pb_len = pullback(&g, &h)?.len();
                        cases.push(Cospan {
                            g: g.clone(),
                            h: h.clone(),
                            dup: None,
                        });
                        for k in 0..pb_len {
                            cases.push(Cospan {
                                g: g.clone(),
                                h: h.clone(),
                                dup: Some(k),
                            });
                        }
                    }
                }
            }
        }
    }
    let name = format!("{} preserves weak pullbacks", f.name());
    let anchor = "weakly cartesian functor";
    let r = check_cases(&name, anchor, &cases, &|c| {
        let sq = weak_pullback_square(c)?;
        let fsq = Square::new(
            fmap_fn(f, &sq.top)?,
            fmap_fn(f, &sq.left)?,
            fmap_fn(f, &sq.right)?,
            fmap_fn(f, &sq.bottom)?,
        )?;
        let pb = pullback(&c.g, &c.h)?;
        Ok(weak_pullback_gap(&fsq)?.map(|gap| {
            let variant = match c.dup {
                None => Value::atom("pullback"),
                Some(k) => Value::pair(Value::atom("duplicate"), pb.elements()[k].clone()),
            };
            Witness {
                label: "image of a weak pullback misses a pullback element".into(),
                input: Value::pair(Value::pair(fn_value(&c.g), fn_value(&c.h)), variant),
                left: Some(gap),
                right: None,
            }
        }))
    })?;
    Ok(r.with_fact("max_size", n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Unit,
    Mult,
}

impl Component {
    pub fn as_str(self) -> &'static str {
        match self {
            Component::Unit => "unit",
            Component::Mult => "mult",
        }
    }

    pub fn parse(s: &str) -> Result<Component> {
        match s {
            "unit" | "eta" => Ok(Component::Unit),
            "mult" | "mu" => Ok(Component::Mult),
            other => Err(Error::Parse(format!("expected unit or mult, got {other:?}"))),
        }
    }
}

/// Source functor of the chosen transformation (`1` for the unit, `TT`
/// for the multiplication) and its component at `x`.
fn transformation(m: &MonadRef, which: Component) -> (FunctorRef, Arc<dyn Fn(&FinSet) -> Result<Arrow> + Send + Sync>) {
    let t = functor_of(m);
    match which {
        Component::Unit => {
            let m = m.clone();
            (Arc::new(Identity::new(t.budget())), Arc::new(move |x| unit_arrow(&m, x)))
        }
        Component::Mult => {
            let m = m.clone();
            (compose(&t, &t), Arc::new(move |x| mult_arrow(&m, x)))
        }
    }
}

fn is_finite_beta(m: &MonadRef) -> bool {
    m.name() == "ultrafilter"
}

/// Whether every naturality square of the unit or multiplication along
/// functions between carriers of size at most `n` is a weak pullback.
pub fn check_weakly_cartesian_nat(m: &MonadRef, which: Component, n: usize, cfg: &CheckConfig) -> Result<LawReport> {
    let t = functor_of(m);
    let (src, alpha) = transformation(m, which);
    let fns = all_fns(n, &cfg.budget)?;
    let name = format!("{} of {} is weakly cartesian", which.as_str(), m.name());
    let anchor = "naturality squares are weak pullbacks";
    let mut r = check_cases(&name, anchor, &fns, &|g| {
        let sq = Square::new(
            fmap_fn(&src, g)?,
            alpha(g.dom())?.tabulate(&src.obj(g.dom())?)?,
            alpha(g.cod())?.tabulate(&src.obj(g.cod())?)?,
            fmap_fn(&t, g)?,
        )?;
        Ok(weak_pullback_gap(&sq)?.map(|gap| Witness {
            label: "naturality square is not a weak pullback".into(),
            input: fn_value(g),
            left: Some(gap),
            right: None,
        }))
    })?;
    if which == Component::Unit && is_finite_beta(m) {
        r.note(
            "scale caveat: on finite sets the ultrafilter unit is a bijection, so its squares are pullbacks; \
             the failure of weak cartesianness for this unit only appears on infinite sets",
        );
    }
    Ok(r.with_fact("max_size", n))
}

/// Lifts of every relation between carriers of size at most `n`.
struct LiftTable {
    lifts: HashMap<(usize, usize, u64), FinRel>,
}

impl LiftTable {
    fn new(f: &FunctorRef, n: usize) -> Result<LiftTable> {
        let mut lifts = HashMap::new();
        for x in carriers(n) {
            for y in carriers(n) {
                let cells = x.len() * y.len();
                for mask in 0..(1u64 << cells) {
                    let r = FinRel::from_mask(&x, &y, mask);
                    lifts.insert((x.len(), y.len(), mask), barr_lift(f, &r)?);
                }
            }
        }
        Ok(LiftTable { lifts })
    }

    fn get(&self, x: usize, y: usize, mask: u64) -> &FinRel {
        &self.lifts[&(x, y, mask)]
    }
}

fn mask_of(r: &FinRel) -> u64 {
    let ny = r.cod().len();
    r.pairs().iter().fold(0, |m, (a, b)| {
        let i = r.dom().index_of(a).expect("in domain");
        let j = r.cod().index_of(b).expect("in codomain");
        m | 1u64 << (i * ny + j)
    })
}

fn rel_witness(label: &str, input: Value, l: &FinRel, r: &FinRel) -> Option<Witness> {
    if l.pairs() == r.pairs() {
        None
    } else {
        Some(Witness::paths(label, input, rel_value(l), rel_value(r)))
    }
}

/// Checks that `barr_lift(f, -)` preserves identities, composition, order
/// and converse, and extends `f` on graphs, for carriers of size ≤ `n`.
pub fn check_2functor(f: &FunctorRef, n: usize, cfg: &CheckConfig) -> Result<LawReport> {
    let table = match LiftTable::new(f, n) {
        Ok(t) => t,
        Err(e) if e.is_budget() => return Ok(LawReport::budget_exceeded(format!("2-functor: {}", f.name()), "", &e)),
        Err(e) => return Err(e),
    };
    let cs = carriers(n);
    let sizes: Vec<usize> = (0..=n).collect();

    let ident = check_cases("preserves identities", "F̃(1_X) = 1_{FX}", &sizes, &|&k| {
        let x = &cs[k];
        let id = FinRel::identity(x);
        let lift = table.get(k, k, mask_of(&id));
        Ok(rel_witness("F̃(1)", Value::atom(x.name()), lift, &FinRel::identity(&f.obj(x)?)))
    })?;

    let mut triples = Vec::new();
    for &a in &sizes {
        for &b in &sizes {
            for &c in &sizes {
                for r in 0..(1u64 << (a * b)) {
                    for s in 0..(1u64 << (b * c)) {
                        triples.push((a, b, c, r, s));
                    }
                }
            }
        }
    }
    let comp = check_cases("preserves composition", "F̃(S∘R) = F̃S∘F̃R", &triples, &|&(a, b, c, rm, sm)| {
        let r = FinRel::from_mask(&cs[a], &cs[b], rm);
        let s = FinRel::from_mask(&cs[b], &cs[c], sm);
        let lhs = table.get(a, c, mask_of(&r.compose(&s)?));
        let rhs = table.get(a, b, rm).compose(table.get(b, c, sm))?;
        Ok(rel_witness("F̃(S∘R) vs F̃S∘F̃R", Value::pair(rel_value(&r), rel_value(&s)), lhs, &rhs))
    })?;

    let mut pairs = Vec::new();
    for &a in &sizes {
        for &b in &sizes {
            let cells = a * b;
            for r in 0..(1u64 << cells) {
                for r2 in 0..(1u64 << cells) {
                    if r & r2 == r {
                        pairs.push((a, b, r, r2));
                    }
                }
            }
        }
    }
    let mono = check_cases("monotone", "R ⊆ R' implies F̃R ⊆ F̃R'", &pairs, &|&(a, b, r, r2)| {
        let (l, h) = (table.get(a, b, r), table.get(a, b, r2));
        Ok(l.missing_from(h).map(|(u, v)| {
            Witness::paths(
                "F̃R not contained in F̃R'",
                Value::pair(rel_value(&FinRel::from_mask(&cs[a], &cs[b], r)), rel_value(&FinRel::from_mask(&cs[a], &cs[b], r2))),
                Value::pair(u, v),
                rel_value(h),
            )
        }))
    })?;

    let mut rels = Vec::new();
    for &a in &sizes {
        for &b in &sizes {
            for r in 0..(1u64 << (a * b)) {
                rels.push((a, b, r));
            }
        }
    }
    let conv = check_cases("preserves converse", "F̃(R°) = (F̃R)°", &rels, &|&(a, b, rm)| {
        let r = FinRel::from_mask(&cs[a], &cs[b], rm);
        let lhs = table.get(b, a, mask_of(&r.converse()));
        Ok(rel_witness("F̃(R°) vs (F̃R)°", rel_value(&r), lhs, &table.get(a, b, rm).converse()))
    })?;

    let fns = all_fns(n, &cfg.budget)?;
    let ext = check_cases("extends F", "F̃(g_*) = (Fg)_*", &fns, &|g| {
        let lift = table.get(g.dom().len(), g.cod().len(), mask_of(&FinRel::graph(g)));
        Ok(rel_witness("F̃(g_*) vs (Fg)_*", fn_value(g), lift, &FinRel::graph(&fmap_fn(f, g)?)))
    })?;

    Ok(LawReport::group(
        format!("2-functor: {}", f.name()),
        "locally monotone extension to relations",
        vec![ident, comp, mono, conv, ext],
    )
    .with_fact("max_size", n))
}

/// Whether `(α_X)_*` is natural for the lifted functors:
/// `(α_Y)_*∘S̃R = T̃R∘(α_X)_*` for every relation `R` on carriers of size ≤ `n`.
pub fn check_lifted_naturality(m: &MonadRef, which: Component, n: usize) -> Result<LawReport> {
    let t = functor_of(m);
    let (src, alpha) = transformation(m, which);
    let cs = carriers(n);
    let mut rels = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            for r in 0..(1u64 << (a * b)) {
                rels.push((a, b, r));
            }
        }
    }
    let name = format!("lifted {} of {} is natural", which.as_str(), m.name());
    check_cases(&name, "(α_Y)_*∘F̃R = G̃R∘(α_X)_*", &rels, &|&(a, b, rm)| {
        let r = FinRel::from_mask(&cs[a], &cs[b], rm);
        let ax = FinRel::graph(&alpha(&cs[a])?.tabulate(&src.obj(&cs[a])?)?);
        let ay = FinRel::graph(&alpha(&cs[b])?.tabulate(&src.obj(&cs[b])?)?);
        let lhs = barr_lift(&src, &r)?.compose(&ay)?;
        let rhs = ax.compose(&barr_lift(&t, &r)?)?;
        Ok(rel_witness("(α_Y)_*∘F̃R vs G̃R∘(α_X)_*", rel_value(&r), &lhs, &rhs))
    })
}
