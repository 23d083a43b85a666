use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::finrel::{Arrow, FinFn, FinSet, Value};
use crate::monadkit::{
    check_cases, check_pointwise, compose, fmap_arrow, fmap_fn, fn_value, functor_of, mult_arrow, unit_arrow,
    CheckConfig, Domain, FunctorRef, MonadRef,
};
use crate::report::{LawReport, Status, Witness};
use crate::zoo::{FilterMonad, Identity, Multiset, NormalBand, Powerset, PowersetKind, DEFAULT_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strength {
    Strict,
    Weak,
}

impl Strength {
    pub fn as_str(self) -> &'static str {
        match self {
            Strength::Strict => "strict",
            Strength::Weak => "weak",
        }
    }
}

pub type Component = Arc<dyn Fn(&FinSet, &Value) -> Result<Value> + Send + Sync>;

/// A (weak) distributive law `δ: TS ⇒ ST` of `S = (S, ν, ω)` over
/// `T = (T, η, μ)`, given by its value at each element of `TSX`.
#[derive(Clone)]
pub struct DistLaw {
    name: String,
    s: MonadRef,
    t: MonadRef,
    strength: Strength,
    component: Component,
}

impl DistLaw {
    pub fn new(name: impl Into<String>, s: &MonadRef, t: &MonadRef, strength: Strength, component: Component) -> DistLaw {
        DistLaw {
            name: name.into(),
            s: s.clone(),
            t: t.clone(),
            strength,
            component,
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

    pub fn strength(&self) -> Strength {
        self.strength
    }

    pub fn with_strength(mut self, strength: Strength) -> DistLaw {
        self.strength = strength;
        self
    }

    pub fn budget(&self) -> Budget {
        self.t.budget()
    }

    /// `δ_X` at one element of `TSX`.
    pub fn delta(&self, x: &FinSet, v: &Value) -> Result<Value> {
        (self.component)(x, v)
    }

    /// `δ_X` as an arrow into `STX`.
    pub fn delta_arrow(&self, x: &FinSet) -> Result<Arrow> {
        let cod = self.st().obj(x)?;
        let c = self.component.clone();
        let x = x.clone();
        Ok(Arrow::new(&cod, move |v| c(&x, v)))
    }

    /// `δ_X` without listing `STX`.
    pub fn delta_lazy(&self, x: &FinSet) -> Arrow {
        let c = self.component.clone();
        let label = format!("ST({})", x.name());
        let x = x.clone();
        Arrow::opaque(label, move |v| c(&x, v))
    }

    pub fn delta_fn(&self, x: &FinSet) -> Result<FinFn> {
        let dom = self.ts().obj(x)?;
        self.delta_arrow(x)?.tabulate(&dom)
    }

    /// The functor `T∘S`.
    pub fn ts(&self) -> FunctorRef {
        compose(&functor_of(&self.t), &functor_of(&self.s))
    }

    /// The functor `S∘T`.
    pub fn st(&self) -> FunctorRef {
        compose(&functor_of(&self.s), &functor_of(&self.t))
    }
}

impl std::fmt::Debug for DistLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DistLaw({}: {} over {}, {})", self.name, self.s.name(), self.t.name(), self.strength.as_str())
    }
}

fn span_budget(n: usize, budget: &Budget) -> Result<()> {
    if n >= 64 {
        return Err(Error::budget("choices of subsets", u128::MAX, budget.max_elements));
    }
    budget.check(|| format!("subsets of a {n}-element union"), 1u128 << n)
}

/// `𝒜 ↦ {B ⊆ ⋃𝒜 : B ∩ A ≠ ∅ for all A ∈ 𝒜}`.
fn hitting_sets(family: &[Value], budget: &Budget) -> Result<Vec<Value>> {
    let mut union: Vec<Value> = Vec::new();
    for a in family {
        union.extend(a.expect_set()?.iter().cloned());
    }
    union.sort();
    union.dedup();
    let n = union.len();
    span_budget(n, budget)?;
    let masks: Vec<u64> = family
        .iter()
        .map(|a| {
            a.expect_set()
                .map(|m| m.iter().fold(0u64, |acc, v| acc | 1u64 << union.binary_search(v).expect("in union")))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for b in 0u64..(1u64 << n) {
        if masks.iter().all(|m| m & b != 0) {
            let mut pts = Vec::with_capacity(b.count_ones() as usize);
            let mut r = b;
            while r != 0 {
                pts.push(union[r.trailing_zeros() as usize].clone());
                r &= r - 1;
            }
            out.push(pts);
        }
    }
    Ok(out.into_iter().map(Value::set_sorted).collect())
}

/// `P` over `P_f`: `δ(𝒜) = {B ⊆ ⋃𝒜 : B meets every A ∈ 𝒜}`.
pub fn pf_over_p(budget: Budget) -> DistLaw {
    let s: MonadRef = Arc::new(Powerset::new(PowersetKind::Full, budget));
    let t: MonadRef = Arc::new(Powerset::new(PowersetKind::Finite, budget));
    DistLaw::new(
        "pf-over-p",
        &s,
        &t,
        Strength::Weak,
        Arc::new(move |_x, v| Ok(Value::set(hitting_sets(v.expect_set()?, &budget)?))),
    )
}

fn beta_component(beta: Arc<FilterMonad>) -> Component {
    use crate::monadkit::Functor;
    Arc::new(move |x, v| {
        let bx = beta.obj(x)?;
        let unions = v
            .expect_set()?
            .iter()
            .map(|a| Value::union_all(a.expect_set()?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::set(
            bx.iter().filter(|f| unions.iter().all(|u| f.contains(u))).cloned(),
        ))
    })
}

/// `P` over `β`: `δ(𝐅) = {F ∈ βX : ⋃𝒜 ∈ F for all 𝒜 ∈ 𝐅}`.
pub fn p_over_beta(budget: Budget) -> DistLaw {
    let beta = Arc::new(FilterMonad::new(true, budget));
    let s: MonadRef = Arc::new(Powerset::new(PowersetKind::Full, budget));
    let t: MonadRef = beta.clone();
    DistLaw::new("p-over-beta", &s, &t, Strength::Weak, beta_component(beta))
}

/// The same formula with the nonempty power set.
pub fn p_plus_over_beta(budget: Budget) -> DistLaw {
    let beta = Arc::new(FilterMonad::new(true, budget));
    let s: MonadRef = Arc::new(Powerset::new(PowersetKind::Nonempty, budget));
    let t: MonadRef = beta.clone();
    DistLaw::new("p-plus-over-beta", &s, &t, Strength::Weak, beta_component(beta))
}

/// `P` over bounded multisets: `A₁⋯Aₙ ↦ {a₁⋯aₙ : aᵢ ∈ Aᵢ}`.
pub fn p_over_multiset(d: usize, budget: Budget) -> DistLaw {
    let s: MonadRef = Arc::new(Powerset::new(PowersetKind::Full, budget));
    let t: MonadRef = Arc::new(Multiset::new(d, budget));
    DistLaw::new(
        "p-over-multiset",
        &s,
        &t,
        Strength::Strict,
        Arc::new(move |_x, v| {
            let mut acc: Vec<Vec<Value>> = vec![vec![]];
            for a in v.expect_multiset()? {
                let choices = a.expect_set()?;
                let next = acc.len() as u128 * choices.len() as u128;
                budget.check(|| "choice products".into(), next)?;
                acc = acc
                    .iter()
                    .flat_map(|w| {
                        choices.iter().map(move |c| {
                            let mut w = w.clone();
                            w.push(c.clone());
                            w
                        })
                    })
                    .collect();
            }
            Ok(Value::set(acc.into_iter().map(Value::multiset)))
        }),
    )
}

/// `P` over normal bands: `(𝒜, A₁, A₂) ↦ {(B, b₁, b₂) : B ⊆ ⋃𝒜 meets every
/// A ∈ 𝒜, b₁ ∈ A₁ ∩ B, b₂ ∈ A₂ ∩ B}`. With a degree bound, elements whose
/// image would need a `B` above the bound are out of range rather than
/// cut down, so the diagrams are only judged where nothing is truncated.
pub fn p_over_normalband(d: Option<usize>, budget: Budget) -> DistLaw {
    let s: MonadRef = Arc::new(Powerset::new(PowersetKind::Full, budget));
    let t: MonadRef = Arc::new(NormalBand::new(d, budget));
    DistLaw::new(
        "p-over-normalband",
        &s,
        &t,
        Strength::Weak,
        Arc::new(move |_x, v| {
            let b = v.expect_bip()?;
            let mut out = Vec::new();
            for hit in hitting_sets(&b.set, &budget)? {
                let pts = hit.expect_set()?;
                if let Some(deg) = d.filter(|&deg| pts.len() > deg) {
                    return Err(Error::OutOfRange {
                        degree: deg,
                        what: format!("δ at {v} needs a {}-point set", pts.len()),
                    });
                }
                for p in pts.iter().filter(|p| b.first.contains(p)) {
                    for q in pts.iter().filter(|q| b.second.contains(q)) {
                        out.push(Value::bip(pts.iter().cloned(), p.clone(), q.clone())?);
                    }
                }
            }
            Ok(Value::set(out))
        }),
    )
}

/// `δ = 1` for `S` over the identity monad.
pub fn identity_law(s: &MonadRef) -> DistLaw {
    let t: MonadRef = Arc::new(Identity::new(s.budget()));
    DistLaw::new(
        format!("{}-over-identity", s.name()),
        s,
        &t,
        Strength::Strict,
        Arc::new(|_x, v| Ok(v.clone())),
    )
}

pub const LAW_NAMES: &[&str] = &["pf-over-p", "p-over-beta", "p-over-multiset", "p-over-normalband", "p-plus-over-beta"];

/// Looks up a shipped law. `p-over-pf` is accepted for `pf-over-p`, and
/// degree-bounded laws take an optional `(d)` suffix.
pub fn law_by_name(name: &str, budget: Budget) -> Result<DistLaw> {
    let parsed = crate::zoo::MonadName::parse(name)?;
    let d = parsed.degree.unwrap_or(DEFAULT_DEGREE);
    if d == 0 {
        return Err(Error::Parse(format!("{name}: degree must be at least 1")));
    }
    let plain = |law: DistLaw| -> Result<DistLaw> {
        match parsed.degree {
            None => Ok(law),
            Some(_) => Err(Error::Parse(format!("{} takes no degree", parsed.monad))),
        }
    };
    match parsed.monad.as_str() {
        "pf-over-p" | "p-over-pf" => plain(pf_over_p(budget)),
        "p-over-beta" => plain(p_over_beta(budget)),
        "p-plus-over-beta" => plain(p_plus_over_beta(budget)),
        "p-over-multiset" => Ok(p_over_multiset(d, budget)),
        "p-over-normalband" => Ok(p_over_normalband(Some(d), budget)),
        other => Err(Error::Unknown(format!("law {other:?}"))),
    }
}

fn diagram(name: &str, anchor: &str, res: Result<LawReport>) -> Result<LawReport> {
    LawReport::or_budget(name, anchor, res)
}

const D1: (&str, &str) = ("S-multiplication diagram", "δ∘Tω = ωT∘Sδ∘δS");
const D2: (&str, &str) = ("T-multiplication diagram", "δ∘μS = Sμ∘δT∘Tδ");
const D3: (&str, &str) = ("S-unit diagram", "δ∘Tν = νT");
const D4: (&str, &str) = ("T-unit diagram", "δ∘ηS = Sη");

// Outer functors are applied through `fmap` directly: only the argument
// arrow needs its codomain, and carriers like `SSTX` never fit.

/// `δ∘Tω = ωT∘Sδ∘δS` on `TSSX`.
pub fn check_s_mult(d: &DistLaw, x: &FinSet, cfg: &CheckConfig) -> Result<LawReport> {
    diagram(D1.0, D1.1, (|| {
        let (t, s) = (d.t(), d.s());
        let sx = s.obj(x)?;
        let dom = Domain::over(&d.ts(), &sx, &cfg.budget)?;
        let omega_x = mult_arrow(s, x)?;
        let delta_x = d.delta_arrow(x)?;
        let tx = t.obj(x)?;
        check_pointwise(
            D1.0,
            D1.1,
            &dom,
            cfg,
            &|v| d.delta(x, &t.fmap(&omega_x, v)?),
            &|v| s.mult(&tx, &s.fmap(&delta_x, &d.delta(&sx, v)?)?),
        )
    })())
}

/// `δ∘μS = Sμ∘δT∘Tδ` on `TTSX`.
pub fn check_t_mult(d: &DistLaw, x: &FinSet, cfg: &CheckConfig) -> Result<LawReport> {
    diagram(D2.0, D2.1, (|| {
        let (t, s) = (d.t(), d.s());
        let sx = s.obj(x)?;
        let tx = t.obj(x)?;
        let tt = functor_of(t);
        let dom = Domain::over(&compose(&tt, &tt), &sx, &cfg.budget)?;
        let delta_x = d.delta_arrow(x)?;
        let mu_x = mult_arrow(t, x)?;
        check_pointwise(
            D2.0,
            D2.1,
            &dom,
            cfg,
            &|v| d.delta(x, &t.mult(&sx, v)?),
            &|v| s.fmap(&mu_x, &d.delta(&tx, &t.fmap(&delta_x, v)?)?),
        )
    })())
}

/// `δ∘Tν = νT` on `TX`.
pub fn check_s_unit(d: &DistLaw, x: &FinSet, cfg: &CheckConfig) -> Result<LawReport> {
    diagram(D3.0, D3.1, (|| {
        let (t, s) = (d.t(), d.s());
        let tx = t.obj(x)?;
        let dom = Domain::over(&functor_of(t), x, &cfg.budget)?;
        let nu_x = unit_arrow(s, x)?;
        check_pointwise(D3.0, D3.1, &dom, cfg, &|v| d.delta(x, &t.fmap(&nu_x, v)?), &|v| s.unit(&tx, v))
    })())
}

/// `δ∘ηS = Sη` on `SX`.
pub fn check_t_unit(d: &DistLaw, x: &FinSet, cfg: &CheckConfig) -> Result<LawReport> {
    diagram(D4.0, D4.1, (|| {
        let (t, s) = (d.t(), d.s());
        let sx = s.obj(x)?;
        let dom = Domain::over(&functor_of(s), x, &cfg.budget)?;
        let eta_x = unit_arrow(t, x)?;
        check_pointwise(D4.0, D4.1, &dom, cfg, &|v| d.delta(x, &t.unit(&sx, v)?), &|v| s.fmap(&eta_x, v))
    })())
}

/// `STg∘δ_X = δ_Y∘TSg` on `TSX` for every `g: X → Y` among the carriers.
pub fn check_law_naturality(d: &DistLaw, sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let name = "naturality of δ";
    let anchor = "STf∘δ_X = δ_Y∘TSf";
    let res = (|| {
        let mut cs: Vec<usize> = sizes.to_vec();
        cs.sort_unstable();
        cs.dedup();
        let carriers: Vec<FinSet> = cs.into_iter().map(FinSet::standard).collect();
        let mut fns = Vec::new();
        for a in &carriers {
            for b in &carriers {
                fns.extend(FinFn::all(a, b, &cfg.budget)?);
            }
        }
        let (ts, st) = (d.ts(), d.st());
        check_cases(name, anchor, &fns, &|g| {
            let tsx = ts.obj(g.dom())?;
            let tsg = fmap_fn(&ts, g)?;
            let stg = fmap_arrow(&st, &g.arrow())?;
            let dx = d.delta_arrow(g.dom())?;
            let dy = d.delta_arrow(g.cod())?;
            for v in tsx.iter() {
                let l = match dx.apply(v).and_then(|w| stg.apply(&w)) {
                    Ok(l) => l,
                    Err(e) if e.is_out_of_range() => continue,
                    Err(e) => return Err(e),
                };
                let r = match tsg.apply(v).and_then(|w| dy.apply(&w)) {
                    Ok(r) => r,
                    Err(e) if e.is_out_of_range() => continue,
                    Err(e) => return Err(e),
                };
                if l != r {
                    return Ok(Some(Witness::paths(name, Value::pair(fn_value(g), v.clone()), l, r)));
                }
            }
            Ok(None)
        })
    })();
    LawReport::or_budget(name, anchor, res)
}

/// Evaluates the required diagrams at every carrier size, plus naturality.
/// For weak laws the T-unit diagram is evaluated too and attached as an
/// informational child that does not affect the overall status.
pub fn check_law(d: &DistLaw, sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let mut required = Vec::new();
    let mut dropped = Vec::new();
    for &n in sizes {
        let x = FinSet::standard(n);
        let mut per = vec![check_s_mult(d, &x, cfg)?, check_t_mult(d, &x, cfg)?, check_s_unit(d, &x, cfg)?];
        let t_unit = check_t_unit(d, &x, cfg)?;
        match d.strength() {
            Strength::Strict => per.push(t_unit),
            Strength::Weak => dropped.push(t_unit.with_fact("size", n)),
        }
        required.push(LawReport::group(format!("size {n}"), "", per));
    }
    required.push(check_law_naturality(d, sizes, cfg)?);
    let kind = match d.strength() {
        Strength::Strict => "distributive law",
        Strength::Weak => "weak distributive law",
    };
    let mut top = LawReport::group(
        format!("{kind} {}: {} over {}", d.name(), d.s().name(), d.t().name()),
        match d.strength() {
            Strength::Strict => "four diagrams and naturality",
            Strength::Weak => "three diagrams (T-unit dropped) and naturality",
        },
        required,
    )
    .with_fact("strength", d.strength().as_str());
    if d.strength() == Strength::Weak {
        let mut extra = LawReport::group("dropped T-unit diagram (not required)", D4.1, dropped);
        let verdict = match extra.status {
            Status::Fail => "fails",
            Status::Pass | Status::SampledPass => "holds",
            Status::BudgetExceeded => "was not decided",
        };
        extra.note(format!("the T-unit diagram {verdict} at the tested sizes"));
        if d.t().name() == "ultrafilter" && extra.is_pass() {
            extra.note("scale caveat: it holds here because the ultrafilter unit is a bijection on finite sets");
        }
        top.set_fact("t_unit_diagram", extra.status.as_str());
        top.children.push(extra);
    }
    Ok(top)
}
