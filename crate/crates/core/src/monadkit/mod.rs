//! Monads on finite sets as executable generators, with law checking,
//! algebras and Kleisli plumbing.

mod algebra;
mod check;
mod laws;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand_chacha::ChaCha8Rng;

use crate::error::{Budget, Result};
use crate::finrel::{Arrow, FinFn, FinSet, Value};

pub use algebra::{
    check_algebra, check_algebra_morphism, enumerate_algebras, enumerate_algebras_with, kleisli_compose,
    normalize_semialgebra, AlgebraSpec, Normalized,
};
pub use check::{check_cases, check_pointwise, check_predicate, CheckConfig, Domain, Sampler};
pub use laws::{check_monad_laws, fn_value};

/// An endofunctor on finite sets, given by per-carrier generators.
pub trait Functor: Send + Sync {
    fn name(&self) -> String;

    /// `|FX|` for `|X| = n`, where known in closed form.
    fn size_hint(&self, n: usize) -> Option<u128>;

    /// The canonical carrier `FX`.
    fn obj(&self, x: &FinSet) -> Result<FinSet>;

    /// `F(f)` applied to one element of `F(dom f)`.
    fn fmap(&self, f: &Arrow, t: &Value) -> Result<Value>;

    /// A pseudo-random element of `FX`, for carriers too large to list.
    fn sample(&self, x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value>;

    fn budget(&self) -> Budget;

    /// The elements of `FX` built from at most `k` members of `X`, for
    /// functors that can list them without listing all of `FX`.
    fn small_elements(&self, _x: &FinSet, _k: usize) -> Option<Result<Vec<Value>>> {
        None
    }
}

/// A monad `(T, η, μ)` on finite sets.
pub trait Monad: Functor {
    fn unit(&self, x: &FinSet, v: &Value) -> Result<Value>;

    /// `μ_X` at one element of `TTX`. Truncated monads return an
    /// out-of-range error where the flattened value exceeds the degree.
    fn mult(&self, x: &FinSet, t: &Value) -> Result<Value>;

    fn truncation(&self) -> Option<usize> {
        None
    }
}

pub type FunctorRef = Arc<dyn Functor>;
pub type MonadRef = Arc<dyn Monad>;

/// Upcasts a monad handle to its functor part.
pub fn functor_of(m: &MonadRef) -> FunctorRef {
    m.clone()
}

/// Whether `FX` for `|X| = n` fits the budget (unknown sizes are assumed to).
pub fn fits(f: &dyn Functor, n: usize, budget: &Budget) -> bool {
    f.size_hint(n).is_none_or(|s| s <= budget.max_elements)
}

/// `F(f)` as a lazily evaluated arrow into `F(cod f)`.
pub fn fmap_arrow(f: &FunctorRef, a: &Arrow) -> Result<Arrow> {
    if a.is_opaque() {
        let (f, a) = (f.clone(), a.clone());
        return Ok(Arrow::opaque(format!("{}({})", f.name(), a.cod().name()), move |t| f.fmap(&a, t)));
    }
    let cod = f.obj(a.cod())?;
    let f = f.clone();
    let a = a.clone();
    Ok(Arrow::new(&cod, move |t| f.fmap(&a, t)))
}

/// `F(f)` tabulated over `F(dom f)`.
pub fn fmap_fn(f: &FunctorRef, g: &FinFn) -> Result<FinFn> {
    let dom = f.obj(g.dom())?;
    let cod = f.obj(g.cod())?;
    let a = g.arrow();
    FinFn::new(&dom, &cod, |t| f.fmap(&a, t))
}

pub fn unit_arrow(m: &MonadRef, x: &FinSet) -> Result<Arrow> {
    let tx = m.obj(x)?;
    let m = m.clone();
    let x = x.clone();
    Ok(Arrow::new(&tx, move |v| m.unit(&x, v)))
}

pub fn unit_fn(m: &MonadRef, x: &FinSet) -> Result<FinFn> {
    unit_arrow(m, x)?.tabulate(x)
}

/// `μ_X`, tabulated when `TTX` fits the budget and lazy otherwise.
pub fn mult_arrow(m: &MonadRef, x: &FinSet) -> Result<Arrow> {
    let tx = m.obj(x)?;
    let lazy = {
        let m = m.clone();
        let x = x.clone();
        Arrow::new(&tx, move |v| m.mult(&x, v))
    };
    if !fits(m.as_ref(), tx.len(), &m.budget()) {
        return Ok(lazy);
    }
    let ttx = match m.obj(&tx) {
        Ok(s) => s,
        Err(e) if e.is_budget() => return Ok(lazy),
        Err(e) => return Err(e),
    };
    let mut images = Vec::with_capacity(ttx.len());
    for t in ttx.iter() {
        match m.mult(x, t) {
            Ok(v) => images.push(Some(v)),
            Err(e) if e.is_out_of_range() => images.push(None),
            Err(e) => return Err(e),
        }
    }
    let table: Arc<[Option<Value>]> = images.into();
    let m2 = m.clone();
    let x2 = x.clone();
    Ok(Arrow::new(&tx, move |v| match ttx.index_of(v) {
        Some(i) => match &table[i] {
            Some(w) => Ok(w.clone()),
            None => m2.mult(&x2, v),
        },
        None => m2.mult(&x2, v),
    }))
}

pub fn mult_fn(m: &MonadRef, x: &FinSet) -> Result<FinFn> {
    let tx = m.obj(x)?;
    let ttx = m.obj(&tx)?;
    FinFn::new(&ttx, &tx, |v| m.mult(x, v))
}

/// Memo table keyed by carrier; values are computed outside the lock so
/// generators may recurse into the same table.
pub struct Memo<V> {
    map: Mutex<HashMap<u64, Vec<(FinSet, V)>>>,
}

impl<V> Default for Memo<V> {
    fn default() -> Self {
        Memo {
            map: Mutex::new(HashMap::new()),
        }
    }
}

impl<V: Clone> Memo<V> {
    pub fn get_or_try(&self, x: &FinSet, f: impl FnOnce() -> Result<V>) -> Result<V> {
        if let Some(v) = self.get(x) {
            return Ok(v);
        }
        let v = f()?;
        let mut map = self.map.lock().expect("memo lock");
        let bucket = map.entry(x.fingerprint()).or_default();
        if let Some((_, existing)) = bucket.iter().find(|(k, _)| k == x) {
            return Ok(existing.clone());
        }
        bucket.push((x.clone(), v.clone()));
        Ok(v)
    }

    pub fn get(&self, x: &FinSet) -> Option<V> {
        let map = self.map.lock().expect("memo lock");
        map.get(&x.fingerprint())
            .and_then(|b| b.iter().find(|(k, _)| k == x).map(|(_, v)| v.clone()))
    }
}

/// The composite `G∘F` (apply `inner` first).
pub struct Compose {
    outer: FunctorRef,
    inner: FunctorRef,
}

pub fn compose(outer: &FunctorRef, inner: &FunctorRef) -> FunctorRef {
    Arc::new(Compose {
        outer: outer.clone(),
        inner: inner.clone(),
    })
}

impl Functor for Compose {
    fn name(&self) -> String {
        format!("{}∘{}", self.outer.name(), self.inner.name())
    }

    fn size_hint(&self, n: usize) -> Option<u128> {
        let k = self.inner.size_hint(n)?;
        if k > usize::MAX as u128 {
            return Some(u128::MAX);
        }
        self.outer.size_hint(k as usize)
    }

    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        self.outer.obj(&self.inner.obj(x)?)
    }

    fn fmap(&self, f: &Arrow, t: &Value) -> Result<Value> {
        self.outer.fmap(&fmap_arrow(&self.inner, f)?, t)
    }

    fn sample(&self, x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value> {
        self.outer.sample(&self.inner.obj(x)?, rng)
    }

    fn budget(&self) -> Budget {
        self.outer.budget()
    }
}
