use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Budget, Result};
use crate::finrel::{Arrow, FinSet, Value};
use crate::lawengine::{DistLaw, Strength};
use crate::monadkit::{fmap_arrow, functor_of, mult_arrow, Functor, Memo, Monad};

/// The composite monad of a law. For a strict law this is `ST` with unit
/// `νη` and multiplication `Sμ∘ω∘Sδ`. For a weak law the carrier is the
/// fixed-point set of `e = Sμ∘δT∘ηST` inside `STX`, and every structure
/// map is followed by `e`.
pub struct CompositeMonad {
    law: DistLaw,
    carriers: Memo<FinSet>,
    mus: Memo<Arrow>,
}

impl CompositeMonad {
    pub fn new(law: &DistLaw) -> CompositeMonad {
        CompositeMonad {
            law: law.clone(),
            carriers: Memo::default(),
            mus: Memo::default(),
        }
    }

    pub fn law(&self) -> &DistLaw {
        &self.law
    }

    fn weak(&self) -> bool {
        self.law.strength() == Strength::Weak
    }

    // `μ_X`, left unlisted when `TTX` is too large
    fn mu(&self, x: &FinSet) -> Result<Arrow> {
        self.mus.get_or_try(x, || match mult_arrow(self.law.t(), x) {
            Err(e) if e.is_budget() => {
                let (t, x) = (self.law.t().clone(), x.clone());
                Ok(Arrow::opaque(format!("μ_{}", x.name()), move |v| t.mult(&x, v)))
            }
            r => r,
        })
    }

    /// `e_X = Sμ_X∘δ_{TX}∘η_{STX}` on `STX`.
    pub fn idempotent(&self, x: &FinSet, v: &Value) -> Result<Value> {
        let (s, t) = (self.law.s(), self.law.t());
        let tx = listed_or_named(t.obj(x), || format!("T({})", x.name()))?;
        // only carrier-dependent units need STX listed
        let stx = listed_or_named(s.obj(&tx), || format!("ST({})", x.name()))?;
        let mu = self.mu(x)?;
        s.fmap(&mu, &self.law.delta(&tx, &t.unit(&stx, v)?)?)
    }

    /// `STX`, before any splitting.
    pub fn st_obj(&self, x: &FinSet) -> Result<FinSet> {
        self.law.s().obj(&self.law.t().obj(x)?)
    }

    /// The multiplication of `ST` used by strict laws: `Sμ∘ω_{TT}∘Sδ_T` on `STSTX`.
    pub fn strict_mult(&self, x: &FinSet, v: &Value) -> Result<Value> {
        let (s, t) = (self.law.s(), self.law.t());
        let tx = listed_or_named(t.obj(x), || format!("T({})", x.name()))?;
        let delta_tx = self.law.delta_lazy(&tx);
        let ttx = listed_or_named(t.obj(&tx), || format!("TT({})", x.name()))?;
        let mu = self.mu(x)?;
        s.fmap(&mu, &s.mult(&ttx, &s.fmap(&delta_tx, v)?)?)
    }

    fn settle(&self, x: &FinSet, v: Value) -> Result<Value> {
        if self.weak() {
            self.idempotent(x, &v)
        } else {
            Ok(v)
        }
    }
}

/// The listed set, or an empty stand-in carrying only a name when listing
/// would exceed the budget.
fn listed_or_named(r: Result<FinSet>, name: impl FnOnce() -> String) -> Result<FinSet> {
    match r {
        Err(e) if e.is_budget() => Ok(FinSet::new(name(), [])),
        r => r,
    }
}

impl Functor for CompositeMonad {
    fn name(&self) -> String {
        let kind = if self.weak() { "weak composite" } else { "composite" };
        format!("{kind} {}", self.law.name())
    }

    fn size_hint(&self, n: usize) -> Option<u128> {
        if self.weak() {
            return None;
        }
        let t = self.law.t().size_hint(n)?;
        self.law.s().size_hint(usize::try_from(t).ok()?)
    }

    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        self.carriers.get_or_try(x, || {
            let stx = self.st_obj(x)?;
            if !self.weak() {
                return Ok(stx);
            }
            let mut fixed = Vec::new();
            for v in stx.iter() {
                if self.idempotent(x, v)? == *v {
                    fixed.push(v.clone());
                }
            }
            Ok(FinSet::from_sorted(format!("C({})", x.name()), fixed))
        })
    }

    fn fmap(&self, f: &Arrow, v: &Value) -> Result<Value> {
        let tf = fmap_arrow(&functor_of(self.law.t()), f)?;
        let w = self.law.s().fmap(&tf, v)?;
        self.settle(f.cod(), w)
    }

    // `TX` may be too large to list, so `S` is sampled over a few sampled
    // elements of `TX`
    fn sample(&self, x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value> {
        let (s, t) = (self.law.s(), self.law.t());
        let k = rng.gen_range(1..=4);
        let picks = (0..k).map(|_| t.sample(x, rng)).collect::<Result<Vec<_>>>()?;
        let v = s.sample(&FinSet::new("sampled", picks), rng)?;
        self.settle(x, v)
    }

    fn budget(&self) -> Budget {
        self.law.budget()
    }

    fn small_elements(&self, x: &FinSet, k: usize) -> Option<Result<Vec<Value>>> {
        let (s, t) = (self.law.s(), self.law.t());
        let run = || -> Result<Vec<Value>> {
            let inner = match t.small_elements(x, k) {
                Some(r) => r?,
                None => t.obj(x)?.elements().to_vec(),
            };
            let inner = FinSet::new("small", inner);
            let outer = match s.small_elements(&inner, k) {
                Some(r) => r?,
                None => s.obj(&inner)?.elements().to_vec(),
            };
            let mut out = outer.into_iter().map(|v| self.settle(x, v)).collect::<Result<Vec<_>>>()?;
            out.sort();
            out.dedup();
            Ok(out)
        };
        Some(run())
    }
}

impl Monad for CompositeMonad {
    fn unit(&self, x: &FinSet, v: &Value) -> Result<Value> {
        let (s, t) = (self.law.s(), self.law.t());
        let tx = listed_or_named(t.obj(x), || format!("T({})", x.name()))?;
        let w = s.unit(&tx, &t.unit(x, v)?)?;
        self.settle(x, w)
    }

    // for weak laws CX ⊆ STX, so the inclusion ST(ι) leaves values alone
    fn mult(&self, x: &FinSet, v: &Value) -> Result<Value> {
        let w = self.strict_mult(x, v)?;
        self.settle(x, w)
    }

    fn truncation(&self) -> Option<usize> {
        self.law.t().truncation()
    }
}

impl std::fmt::Debug for CompositeMonad {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CompositeMonad({})", self.law.name())
    }
}
