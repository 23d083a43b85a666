use std::sync::Arc;

use crate::barr::barr_lift;
use crate::error::{Error, Result};
use crate::finrel::{Arrow, FinFn, FinRel, FinSet, Value};
use crate::lawengine::{DistLaw, Strength};
use crate::monadkit::{fmap_arrow, functor_of, mult_arrow, unit_arrow, CheckConfig, Domain, Memo, MonadRef};
use crate::report::{LawReport, Witness};
use crate::zoo::{Powerset, PowersetKind};

type Action = Arc<dyn Fn(&FinFn, &FinSet) -> Result<Arrow> + Send + Sync>;
type Component = Arc<dyn Fn(&FinSet) -> Result<Arrow> + Send + Sync>;

/// An extension of `T` to the Kleisli category of `S`: Kleisli maps
/// `X → SY` go to Kleisli maps `TX → STY`.
#[derive(Clone)]
pub struct Extension {
    pub s: MonadRef,
    pub t: MonadRef,
    action: Action,
    unit: Option<Component>,
    mult: Option<Component>,
}

impl Extension {
    pub fn new(
        s: &MonadRef,
        t: &MonadRef,
        action: impl Fn(&FinFn, &FinSet) -> Result<Arrow> + Send + Sync + 'static,
    ) -> Extension {
        Extension {
            s: s.clone(),
            t: t.clone(),
            action: Arc::new(action),
            unit: None,
            mult: None,
        }
    }

    /// The image of `f: X → SY`; `y` names the target carrier.
    pub fn apply(&self, f: &FinFn, y: &FinSet) -> Result<Arrow> {
        f.cod().require_same(&self.s.obj(y)?, "Kleisli map codomain")?;
        (self.action)(f, y)
    }

    /// As [`Extension::apply`], tabulated over `T(dom f)`.
    pub fn apply_fn(&self, f: &FinFn, y: &FinSet) -> Result<FinFn> {
        let tx = self.t.obj(f.dom())?;
        self.apply(f, y)?.tabulate(&tx)
    }

    /// For `S = P`, the image read as a relation `TX ↛ TY`.
    pub fn apply_rel(&self, f: &FinFn, y: &FinSet) -> Result<FinRel> {
        let g = self.apply_fn(f, y)?;
        let ty = self.t.obj(y)?;
        FinRel::new(
            g.dom(),
            &ty,
            g.pairs()
                .map(|(u, vs)| Ok(vs.expect_set()?.iter().map(|v| (u.clone(), v.clone())).collect::<Vec<_>>()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten(),
        )
    }

    /// The Kleisli unit component `X → STX`, when known.
    pub fn unit(&self, x: &FinSet) -> Option<Result<Arrow>> {
        self.unit.as_ref().map(|u| u(x))
    }

    /// The Kleisli multiplication component `TTX → STX`, when known.
    pub fn mult(&self, x: &FinSet) -> Option<Result<Arrow>> {
        self.mult.as_ref().map(|m| m(x))
    }
}

/// `f ↦ δ_Y∘Tf`. Strict laws also give the unit `ν_{TX}∘η_X` and the
/// multiplication `ν_{TX}∘μ_X`.
pub fn extension_from_law(d: &DistLaw) -> Extension {
    let law = d.clone();
    let mut ext = Extension::new(d.s(), d.t(), move |f, y| {
        let tf = fmap_arrow(&functor_of(law.t()), &f.arrow())?;
        let dy = law.delta_arrow(y)?;
        Ok(tf.then(&dy))
    });
    if d.strength() == Strength::Strict {
        let (s, t) = (d.s().clone(), d.t().clone());
        ext.unit = Some(Arc::new(move |x| Ok(unit_arrow(&t, x)?.then(&unit_arrow(&s, &t.obj(x)?)?))));
        let (s, t) = (d.s().clone(), d.t().clone());
        ext.mult = Some(Arc::new(move |x| Ok(mult_arrow(&t, x)?.then(&unit_arrow(&s, &t.obj(x)?)?))));
    }
    ext
}

/// `δ_X` is the image of `1_{SX}`, viewed as a Kleisli map `SX → SX`.
pub fn law_from_extension(name: &str, ext: &Extension, strength: Strength) -> DistLaw {
    let memo: Arc<Memo<Arrow>> = Arc::new(Memo::default());
    let e = ext.clone();
    DistLaw::new(
        name,
        &ext.s,
        &ext.t,
        strength,
        Arc::new(move |x, v| {
            let dx = memo.get_or_try(x, || e.apply(&FinFn::identity(&e.s.obj(x)?), x))?;
            dx.apply(v)
        }),
    )
}

/// The extension of `T` to relations for `S = P`: the graph of `f` is
/// lifted by `T` and read back as a map `TX → P(TY)`.
pub fn barr_extension(t: &MonadRef) -> Extension {
    let s: MonadRef = Arc::new(Powerset::new(PowersetKind::Full, t.budget()));
    let tt = t.clone();
    let ss = s.clone();
    Extension::new(&s, t, move |f, y| {
        let r = FinRel::from_predicate(f.dom(), y, |a, b| Ok(f.apply(a)?.contains(b)))?;
        let lifted = barr_lift(&functor_of(&tt), &r)?;
        let cod = ss.obj(&tt.obj(y)?)?;
        Ok(Arrow::new(&cod, move |u| {
            if !lifted.dom().contains(u) {
                return Err(Error::mismatch(format!("{u} is not in {}", lifted.dom().name())));
            }
            Ok(Value::set(lifted.image_of(u)))
        }))
    })
}

/// Pointwise agreement of two laws with the same `S` and `T` on `TSX` for
/// each size. Elements that leave a truncation on either side are skipped.
pub fn compare_laws(a: &DistLaw, b: &DistLaw, sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let name = format!("{} agrees with {}", a.name(), b.name());
    let anchor = "equal components δ_X on TSX";
    let mut children = Vec::new();
    for &n in sizes {
        let x = FinSet::standard(n);
        let label = format!("size {n}");
        let res = (|| -> Result<LawReport> {
            let dom = Domain::over(&a.ts(), &x, &cfg.budget)?;
            let (elems, skipped) = dom.elements(cfg)?;
            let mut r = LawReport::pass(label.clone(), anchor, 0);
            r.skipped = skipped;
            for v in &elems {
                match (a.delta(&x, v), b.delta(&x, v)) {
                    (Err(e), _) | (_, Err(e)) if e.is_out_of_range() => r.skipped += 1,
                    (l, rr) => {
                        let (l, rr) = (l?, rr?);
                        r.checked += 1;
                        if l != rr {
                            r.set_fail(Witness::paths(format!("{} ≠ {}", a.name(), b.name()), v.clone(), l, rr));
                            break;
                        }
                    }
                }
            }
            if !dom.is_exhaustive() && r.is_pass() {
                r.status = crate::report::Status::SampledPass;
                r.seed = Some(cfg.seed);
            }
            Ok(r)
        })();
        children.push(LawReport::or_budget(&label, anchor, res)?);
    }
    Ok(LawReport::group(name, anchor, children))
}
