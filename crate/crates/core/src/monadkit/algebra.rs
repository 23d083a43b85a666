use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::finrel::{split_idempotent, Arrow, FinFn, FinSet, Value};
use crate::monadkit::{check_pointwise, fmap_arrow, functor_of, mult_arrow, unit_arrow, CheckConfig, Domain, MonadRef};
use crate::report::LawReport;

/// A carrier with an action `TX -> X`; an algebra or, without the unit
/// law, a semialgebra.
#[derive(Clone)]
pub struct AlgebraSpec {
    pub monad: MonadRef,
    pub carrier: FinSet,
    pub action: Arrow,
}

impl AlgebraSpec {
    pub fn new(monad: &MonadRef, carrier: &FinSet, action: Arrow) -> AlgebraSpec {
        AlgebraSpec {
            monad: monad.clone(),
            carrier: carrier.clone(),
            action,
        }
    }

    pub fn from_fn(monad: &MonadRef, action: &FinFn) -> Result<AlgebraSpec> {
        let tx = monad.obj(action.cod())?;
        tx.require_same(action.dom(), "algebra action domain")?;
        Ok(AlgebraSpec::new(monad, action.cod(), action.arrow()))
    }

    pub fn act(&self, v: &Value) -> Result<Value> {
        self.action.apply(v)
    }

    /// The action tabulated over `TX`.
    pub fn table(&self) -> Result<FinFn> {
        let tx = self.monad.obj(&self.carrier)?;
        self.action.tabulate(&tx)
    }

    /// Action table as values in `TX` order (for canonical comparison).
    pub fn images(&self) -> Result<Vec<Value>> {
        Ok(self.table()?.images().to_vec())
    }
}

impl fmt::Debug for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.table() {
            Ok(t) => write!(f, "{}-algebra {:?}", self.monad.name(), t),
            Err(_) => write!(f, "{}-algebra on {}", self.monad.name(), self.carrier.name()),
        }
    }
}

/// With `require_unit`, checks `x∘η = 1` and `x∘Tx = x∘μ`; otherwise only
/// the associativity square.
pub fn check_algebra(a: &AlgebraSpec, require_unit: bool, cfg: &CheckConfig) -> Result<LawReport> {
    let m = &a.monad;
    let x = &a.carrier;
    let kind = if require_unit { "algebra" } else { "semialgebra" };
    let mut children = Vec::new();
    if require_unit {
        let eta = unit_arrow(m, x)?;
        children.push(check_pointwise(
            "unit axiom x∘η = 1",
            "x.η_X = 1_X",
            &Domain::Exhaustive(x.clone()),
            cfg,
            &|v| a.act(&eta.apply(v)?),
            &|v| Ok(v.clone()),
        )?);
    }
    let assoc = (|| -> Result<LawReport> {
        let f = functor_of(m);
        let tx = m.obj(x)?;
        let dom = Domain::over(&f, &tx, &cfg.budget)?;
        let tact = fmap_arrow(&f, &a.action)?;
        let mu = mult_arrow(m, x)?;
        check_pointwise(
            "associativity x∘Tx = x∘μ",
            "x.Tx = x.μ_X",
            &dom,
            cfg,
            &|v| a.act(&tact.apply(v)?),
            &|v| a.act(&mu.apply(v)?),
        )
    })();
    children.push(LawReport::or_budget("associativity x∘Tx = x∘μ", "x.Tx = x.μ_X", assoc)?);
    Ok(LawReport::group(
        format!("{kind} check: {} on {}", m.name(), x.name()),
        "the associativity axiom x.Tx = x.μ_X",
        children,
    ))
}

/// Whether `f` commutes with the actions: `b∘Tf = f∘a`.
pub fn check_algebra_morphism(f: &FinFn, a: &AlgebraSpec, b: &AlgebraSpec) -> Result<bool> {
    let m = &a.monad;
    let tf = fmap_arrow(&functor_of(m), &f.arrow())?;
    let tx = m.obj(&a.carrier)?;
    for v in tx.iter() {
        match (b.act(&tf.apply(v)?), a.act(v).and_then(|w| f.apply(&w))) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(_), Ok(_)) => return Ok(false),
            (Err(e), _) | (_, Err(e)) if e.is_out_of_range() => {}
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(true)
}

/// The genuine algebra obtained by splitting `x∘η` on a semialgebra.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub algebra: AlgebraSpec,
    pub p: FinFn,
    pub i: FinFn,
}

pub fn normalize_semialgebra(a: &AlgebraSpec) -> Result<Normalized> {
    let m = &a.monad;
    let e = FinFn::new(&a.carrier, &a.carrier, |v| a.act(&m.unit(&a.carrier, v)?))?;
    let (p, i) = split_idempotent(&e)?;
    let y = p.cod().renamed(format!("K{}", a.carrier.name()));
    let p = p.with_cod(&y)?;
    let i = FinFn::from_images(&y, i.cod(), i.images().to_vec())?;
    // T(i) is applied lazily; `T` of the outer carrier is never listed
    let (act, p2, i2, m2) = (a.action.clone(), p.clone(), i.arrow(), m.clone());
    let action = Arrow::new(&y, move |v| p2.apply(&act.apply(&m2.fmap(&i2, v)?)?));
    Ok(Normalized {
        algebra: AlgebraSpec::new(m, &y, action),
        p,
        i,
    })
}

/// `μ_Z∘T(g)∘f` for `f: X -> TY` and `g: Y -> TZ`.
pub fn kleisli_compose(m: &MonadRef, f: &FinFn, g: &FinFn, z: &FinSet) -> Result<FinFn> {
    let ty = m.obj(g.dom())?;
    f.cod().require_same(&ty, "Kleisli composition")?;
    let tz = m.obj(z)?;
    g.cod().require_same(&tz, "Kleisli target")?;
    let tg = fmap_arrow(&functor_of(m), &g.arrow())?;
    let mu = mult_arrow(m, z)?;
    FinFn::new(f.dom(), &tz, |v| mu.apply(&tg.apply(&f.apply(v)?)?))
}

/// Every algebra structure on `carrier`, in lexicographic order of
/// action tables. Associativity is checked over `TTX` when it fits the
/// budget; otherwise over a seeded sample, and the flag reports that.
pub fn enumerate_algebras(m: &MonadRef, carrier: &FinSet, cfg: &CheckConfig) -> Result<Vec<AlgebraSpec>> {
    let tx = m.obj(carrier)?;
    let dom = Domain::over(&functor_of(m), &tx, &cfg.budget)?;
    Ok(enumerate_algebras_with(m, carrier, &dom, cfg)?.0)
}

/// As [`enumerate_algebras`], checking associativity over `dom`. Returns the
/// algebras and whether the check was exhaustive.
pub fn enumerate_algebras_with(
    m: &MonadRef,
    carrier: &FinSet,
    dom: &Domain,
    cfg: &CheckConfig,
) -> Result<(Vec<AlgebraSpec>, bool)> {
    let tx = m.obj(carrier)?;
    let n = carrier.len();
    if tx.is_empty() {
        let act = FinFn::from_images(&tx, carrier, vec![])?;
        return Ok((vec![AlgebraSpec::from_fn(m, &act)?], true));
    }
    if n == 0 {
        return Ok((vec![], true));
    }
    // the unit law fixes the action on η-images
    let mut forced: Vec<Option<usize>> = vec![None; tx.len()];
    for (k, a) in carrier.iter().enumerate() {
        let i = tx.index_or_err(&m.unit(carrier, a)?)?;
        match forced[i] {
            Some(j) if j != k => return Ok((vec![], true)),
            _ => forced[i] = Some(k),
        }
    }
    let free: Vec<usize> = (0..tx.len()).filter(|&i| forced[i].is_none()).collect();
    let count = (n as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    cfg.budget.check(|| format!("candidate actions on {}", carrier.name()), count)?;

    // associativity instances: (index of μ(v) in TX, v)
    let (elems, exhaustive) = match dom {
        Domain::Exhaustive(s) => (s.elements().to_vec(), true),
        Domain::Sampled { sampler, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut v = match m.small_elements(&tx, 2) {
                Some(r) => r?,
                None => Vec::new(),
            };
            for _ in 0..cfg.samples {
                match sampler(&mut rng) {
                    Ok(x) => v.push(x),
                    Err(e) if e.is_out_of_range() => {}
                    Err(e) => return Err(e),
                }
            }
            (v, false)
        }
    };
    let mu = mult_arrow(m, carrier)?;
    let mut inst: Vec<(usize, Value)> = Vec::new();
    for v in elems {
        match mu.apply(&v) {
            Ok(w) => inst.push((tx.index_or_err(&w)?, v)),
            Err(e) if e.is_out_of_range() => {}
            Err(e) => return Err(e),
        }
    }
    // smaller instances first, so most candidates fail early
    inst.sort_by_key(|(_, v)| v.to_string().len());
    let f = functor_of(m);
    let tx_arc = Arc::new(tx.clone());

    let found: Vec<Option<Vec<usize>>> = (0..count as u64)
        .into_par_iter()
        .map(|code| {
            let mut table: Vec<usize> = forced.iter().map(|o| o.unwrap_or(0)).collect();
            let mut c = code;
            for &i in free.iter().rev() {
                table[i] = (c % n as u64) as usize;
                c /= n as u64;
            }
            let act = {
                let t = table.clone();
                let txa = tx_arc.clone();
                let car = carrier.clone();
                Arrow::new(carrier, move |v| Ok(car.elements()[t[txa.index_or_err(v)?]].clone()))
            };
            let tact = match fmap_arrow(&f, &act) {
                Ok(a) => a,
                Err(_) => return None,
            };
            for (mu_idx, v) in &inst {
                let lhs = match tact.apply(v).and_then(|w| act.apply(&w)) {
                    Ok(w) => w,
                    Err(_) => continue,
                };
                if lhs != carrier.elements()[table[*mu_idx]] {
                    return None;
                }
            }
            Some(table)
        })
        .collect();
    let mut out = Vec::new();
    for table in found.into_iter().flatten() {
        let images = table.iter().map(|&k| carrier.elements()[k].clone()).collect();
        out.push(AlgebraSpec::from_fn(m, &FinFn::from_images(&tx, carrier, images)?)?);
    }
    Ok((out, exhaustive))
}
