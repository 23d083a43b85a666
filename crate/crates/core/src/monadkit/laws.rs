use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finrel::{FinFn, FinSet, Value};
use crate::monadkit::{
    check_pointwise, fmap_fn, functor_of, mult_arrow, unit_arrow, CheckConfig, Domain, MonadRef,
};
use crate::report::{LawReport, Status, Witness};

/// A function encoded as the set of its input/output pairs.
pub fn fn_value(f: &FinFn) -> Value {
    Value::set(f.pairs().map(|(a, b)| Value::pair(a.clone(), b.clone())))
}

/// Unit, associativity, functoriality and naturality of `m` on the standard
/// carriers of the given sizes.
pub fn check_monad_laws(m: &MonadRef, sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let mut top = LawReport::group(format!("monad laws: {}", m.name()), "monad axioms", vec![]);
    if let Some(d) = m.truncation() {
        top.note(format!(
            "truncated at degree {d}: only instances whose composites stay within the degree are evaluated"
        ));
    }
    for &n in sizes {
        let x = FinSet::standard(n);
        let r = size_laws(m, &x, cfg);
        top.push(LawReport::or_budget(&format!("size {n}"), "", r)?);
    }
    top.push(LawReport::or_budget("functoriality", "", functoriality(m, sizes, cfg))?);
    top.push(LawReport::or_budget("naturality", "", naturality(m, sizes, cfg))?);
    Ok(top)
}

fn size_laws(m: &MonadRef, x: &FinSet, cfg: &CheckConfig) -> Result<LawReport> {
    let f = functor_of(m);
    let tx = m.obj(x)?;
    let eta_x = unit_arrow(m, x)?;
    let mu_x = mult_arrow(m, x)?;
    let dom_tx = Domain::Exhaustive(tx.clone());
    let mut children = vec![
        check_pointwise(
            "unit law μ∘ηT = 1",
            "μ_X∘η_{TX} = 1",
            &dom_tx,
            cfg,
            &|v| mu_x.apply(&m.unit(&tx, v)?),
            &|v| Ok(v.clone()),
        )?,
        check_pointwise(
            "unit law μ∘Tη = 1",
            "μ_X∘Tη_X = 1",
            &dom_tx,
            cfg,
            &|v| mu_x.apply(&m.fmap(&eta_x, v)?),
            &|v| Ok(v.clone()),
        )?,
    ];
    let assoc = (|| -> Result<LawReport> {
        let dom = match m.obj(&tx) {
            Ok(ttx) => Domain::over(&f, &ttx, &cfg.budget)?,
            Err(e) if e.is_budget() => Domain::nested(&f, &tx),
            Err(e) => return Err(e),
        };
        check_pointwise(
            "associativity μ∘Tμ = μ∘μT",
            "μ_X∘Tμ_X = μ_X∘μ_{TX}",
            &dom,
            cfg,
            &|v| mu_x.apply(&m.fmap(&mu_x, v)?),
            &|v| mu_x.apply(&m.mult(&tx, v)?),
        )
    })();
    children.push(LawReport::or_budget("associativity μ∘Tμ = μ∘μT", "μ_X∘Tμ_X = μ_X∘μ_{TX}", assoc)?);
    Ok(LawReport::group(format!("size {}", x.len()), "", children).with_fact("carrier", tx.len()))
}

enum Item {
    Pass(u64, u64),
    Fail(u64, Witness),
    Err(Error),
}

fn fold(name: &str, anchor: &str, items: Vec<Item>) -> Result<LawReport> {
    let mut r = LawReport::pass(name, anchor, 0);
    for it in items {
        match it {
            Item::Pass(c, s) => {
                r.checked += c;
                r.skipped += s;
            }
            Item::Fail(c, w) => {
                r.checked += c;
                r.set_fail(w);
                return Ok(r);
            }
            Item::Err(e) => return Err(e),
        }
    }
    Ok(r)
}

/// Runs `eq` at each element, returning counts and the first mismatch.
fn scan(
    elems: &[Value],
    label: &str,
    tag: &Value,
    eq: impl Fn(&Value) -> Result<(Value, Value)>,
) -> Item {
    let mut checked = 0;
    let mut skipped = 0;
    for v in elems {
        match eq(v) {
            Ok((l, r)) => {
                checked += 1;
                if l != r {
                    return Item::Fail(checked, Witness::paths(label, Value::pair(tag.clone(), v.clone()), l, r));
                }
            }
            Err(e) if e.is_out_of_range() => skipped += 1,
            Err(e) => return Item::Err(e),
        }
    }
    Item::Pass(checked, skipped)
}

fn carriers(sizes: &[usize]) -> Vec<FinSet> {
    let mut s: Vec<usize> = sizes.to_vec();
    s.sort_unstable();
    s.dedup();
    s.into_iter().map(FinSet::standard).collect()
}

fn functoriality(m: &MonadRef, sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let f = functor_of(m);
    let cs = carriers(sizes);
    let mut ids = Vec::new();
    for x in &cs {
        let tx = m.obj(x)?;
        let tid = fmap_fn(&f, &FinFn::identity(x))?;
        ids.push(scan(tx.elements(), "T(1) = 1", &Value::atom(x.name()), |v| {
            Ok((tid.apply(v)?, v.clone()))
        }));
    }
    let ident = fold("T preserves identities", "T(1_X) = 1_{TX}", ids)?;

    let mut pairs = Vec::new();
    for a in &cs {
        for b in &cs {
            for c in &cs {
                let fs = FinFn::all(a, b, &cfg.budget)?;
                let gs = FinFn::all(b, c, &cfg.budget)?;
                for fa in &fs {
                    for gb in &gs {
                        pairs.push((fa.clone(), gb.clone()));
                    }
                }
            }
        }
    }
    let items: Vec<Item> = pairs
        .par_iter()
        .map(|(fa, gb)| {
            let run = || -> Result<Item> {
                let tf = fmap_fn(&f, fa)?;
                let tg = fmap_fn(&f, gb)?;
                let tgf = fmap_fn(&f, &fa.then(gb)?)?;
                let tag = Value::pair(fn_value(fa), fn_value(gb));
                Ok(scan(tf.dom().elements(), "T(g∘f) = Tg∘Tf", &tag, |v| {
                    Ok((tgf.apply(v)?, tg.apply(&tf.apply(v)?)?))
                }))
            };
            run().unwrap_or_else(Item::Err)
        })
        .collect();
    let comp = fold("T preserves composition", "T(g∘f) = Tg∘Tf", items)?;
    Ok(LawReport::group("functoriality", "", vec![ident, comp]))
}

fn naturality(m: &MonadRef, sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let f = functor_of(m);
    let cs = carriers(sizes);
    let mut fns = Vec::new();
    for a in &cs {
        for b in &cs {
            fns.extend(FinFn::all(a, b, &cfg.budget)?);
        }
    }
    let mut units = std::collections::HashMap::new();
    let mut mults = std::collections::HashMap::new();
    let mut sampled = false;
    for x in &cs {
        units.insert(x.len(), unit_arrow(m, x)?);
        let tx = m.obj(x)?;
        let dom = Domain::over(&f, &tx, &cfg.budget)?;
        sampled |= !dom.is_exhaustive();
        mults.insert(x.len(), (x.clone(), dom.elements(cfg)?.0));
    }
    let unit_items: Vec<Item> = fns
        .par_iter()
        .map(|g| {
            let run = || -> Result<Item> {
                let tg = fmap_fn(&f, g)?;
                let ex = &units[&g.dom().len()];
                let ey = &units[&g.cod().len()];
                Ok(scan(g.dom().elements(), "Tf∘η = η∘f", &fn_value(g), |v| {
                    Ok((tg.apply(&ex.apply(v)?)?, ey.apply(&g.apply(v)?)?))
                }))
            };
            run().unwrap_or_else(Item::Err)
        })
        .collect();
    let unit = fold("unit is natural", "Tf∘η_X = η_Y∘f", unit_items)?;
    let mult_items: Vec<Item> = fns
        .par_iter()
        .map(|g| {
            let run = || -> Result<Item> {
                let tg = fmap_fn(&f, g)?;
                let tga = tg.arrow();
                let (x, ttx) = &mults[&g.dom().len()];
                Ok(scan(ttx, "Tf∘μ = μ∘TTf", &fn_value(g), |v| {
                    Ok((tg.apply(&m.mult(x, v)?)?, m.mult(g.cod(), &m.fmap(&tga, v)?)?))
                }))
            };
            run().unwrap_or_else(Item::Err)
        })
        .collect();
    let mut mult = fold("multiplication is natural", "Tf∘μ_X = μ_Y∘TTf", mult_items)?;
    if sampled && mult.status == Status::Pass {
        mult.status = Status::SampledPass;
        mult.seed = Some(cfg.seed);
    }
    Ok(LawReport::group("naturality", "", vec![unit, mult]))
}
