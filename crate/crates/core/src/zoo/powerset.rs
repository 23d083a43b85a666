use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Budget, Error, Result};
use crate::finrel::{Arrow, FinSet, Value};
use crate::monadkit::{Functor, Memo, Monad};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowersetKind {
    Full,
    Nonempty,
    /// On finite carriers this coincides with `Full`; it is kept as its own
    /// name so laws can be stated against it.
    Finite,
}

/// Power-set monads: `η(x) = {x}`, `μ(𝒜) = ⋃𝒜`, arrows by direct image.
pub struct Powerset {
    kind: PowersetKind,
    budget: Budget,
    cache: Memo<FinSet>,
}

impl Powerset {
    pub fn new(kind: PowersetKind, budget: Budget) -> Powerset {
        Powerset {
            kind,
            budget,
            cache: Memo::default(),
        }
    }

    pub fn kind(&self) -> PowersetKind {
        self.kind
    }

    fn symbol(&self) -> &'static str {
        match self.kind {
            PowersetKind::Full => "P",
            PowersetKind::Nonempty => "P+",
            PowersetKind::Finite => "Pf",
        }
    }

    fn nonempty(&self) -> bool {
        self.kind == PowersetKind::Nonempty
    }
}

impl Functor for Powerset {
    fn name(&self) -> String {
        match self.kind {
            PowersetKind::Full => "powerset",
            PowersetKind::Nonempty => "nonempty-powerset",
            PowersetKind::Finite => "finite-powerset",
        }
        .to_string()
    }

    fn size_hint(&self, n: usize) -> Option<u128> {
        if n >= 127 {
            return Some(u128::MAX);
        }
        let all = 1u128 << n;
        Some(if self.nonempty() { all - 1 } else { all })
    }

    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        self.cache.get_or_try(x, || {
            self.budget.check(
                || format!("{}({})", self.symbol(), x.name()),
                self.size_hint(x.len()).unwrap_or(u128::MAX),
            )?;
            let subsets = x.subsets_by_mask(&self.budget)?;
            let skip = usize::from(self.nonempty());
            Ok(FinSet::new(
                format!("{}({})", self.symbol(), x.name()),
                subsets.into_iter().skip(skip),
            ))
        })
    }

    fn fmap(&self, f: &Arrow, t: &Value) -> Result<Value> {
        let imgs = t.expect_set()?.iter().map(|v| f.apply(v)).collect::<Result<Vec<_>>>()?;
        Ok(Value::set(imgs))
    }

    fn sample(&self, x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value> {
        if x.is_empty() {
            return if self.nonempty() {
                Err(Error::InvalidStructure(format!("{}(∅) is empty", self.symbol())))
            } else {
                Ok(Value::empty_set())
            };
        }
        loop {
            let sparse = x.len() > 16 || rng.gen_bool(0.5);
            let mut pick = Vec::new();
            if sparse {
                let k = rng.gen_range(0..=3.min(x.len()));
                for _ in 0..k {
                    pick.push(x.elements()[rng.gen_range(0..x.len())].clone());
                }
            } else {
                for v in x.iter() {
                    if rng.gen_bool(0.5) {
                        pick.push(v.clone());
                    }
                }
            }
            if !(self.nonempty() && pick.is_empty()) {
                return Ok(Value::set(pick));
            }
        }
    }

    fn budget(&self) -> Budget {
        self.budget
    }

    fn small_elements(&self, x: &FinSet, k: usize) -> Option<Result<Vec<Value>>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        small_subsets(x, 0, k, &mut cur, &mut out);
        if self.nonempty() {
            out.retain(|s| s.as_set().is_some_and(|m| !m.is_empty()));
        }
        Some(Ok(out))
    }
}

fn small_subsets(x: &FinSet, from: usize, left: usize, cur: &mut Vec<Value>, out: &mut Vec<Value>) {
    out.push(Value::set_sorted(cur.clone()));
    if left == 0 {
        return;
    }
    for i in from..x.len() {
        cur.push(x.elements()[i].clone());
        small_subsets(x, i + 1, left - 1, cur, out);
        cur.pop();
    }
}

impl Monad for Powerset {
    fn unit(&self, _x: &FinSet, v: &Value) -> Result<Value> {
        Ok(Value::set_sorted(vec![v.clone()]))
    }

    fn mult(&self, _x: &FinSet, t: &Value) -> Result<Value> {
        Value::union_all(t.expect_set()?)
    }
}

/// The identity monad.
pub struct Identity {
    budget: Budget,
}

impl Identity {
    pub fn new(budget: Budget) -> Identity {
        Identity { budget }
    }
}

impl Functor for Identity {
    fn name(&self) -> String {
        "identity".to_string()
    }

    fn size_hint(&self, n: usize) -> Option<u128> {
        Some(n as u128)
    }

    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        Ok(x.clone())
    }

    fn fmap(&self, f: &Arrow, t: &Value) -> Result<Value> {
        f.apply(t)
    }

    fn sample(&self, x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value> {
        if x.is_empty() {
            return Err(Error::InvalidStructure("empty carrier".into()));
        }
        Ok(x.elements()[rng.gen_range(0..x.len())].clone())
    }

    fn budget(&self) -> Budget {
        self.budget
    }
}

impl Monad for Identity {
    fn unit(&self, _x: &FinSet, v: &Value) -> Result<Value> {
        Ok(v.clone())
    }

    fn mult(&self, _x: &FinSet, t: &Value) -> Result<Value> {
        Ok(t.clone())
    }
}
