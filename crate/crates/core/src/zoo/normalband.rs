use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Budget, Error, Result};
use crate::finrel::{Arrow, FinSet, Value};
use crate::monadkit::{Functor, Memo, Monad};
use crate::zoo::multiset::binom;

/// The free normal band monad: nonempty sets with a first and a second
/// point. `μ` takes the union, the first point of the first point and the
/// second point of the second point.
///
/// With a degree, only sets of at most that size are carried and larger
/// unions are out of range.
pub struct NormalBand {
    degree: Option<usize>,
    budget: Budget,
    cache: Memo<FinSet>,
}

impl NormalBand {
    pub fn new(degree: Option<usize>, budget: Budget) -> NormalBand {
        NormalBand {
            degree,
            budget,
            cache: Memo::default(),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    fn cap(&self, n: usize) -> usize {
        self.degree.map_or(n, |d| d.min(n))
    }
}

impl Functor for NormalBand {
    fn name(&self) -> String {
        match self.degree {
            Some(d) => format!("normal-band({d})"),
            None => "normal-band".to_string(),
        }
    }

    fn size_hint(&self, n: usize) -> Option<u128> {
        let mut total: u128 = 0;
        for k in 1..=self.cap(n) as u128 {
            total = total.saturating_add(binom(n as u128, k).saturating_mul(k * k));
        }
        Some(total)
    }

    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        self.cache.get_or_try(x, || {
            let name = match self.degree {
                Some(d) => format!("NB{d}({})", x.name()),
                None => format!("NB({})", x.name()),
            };
            self.budget.check(|| name.clone(), self.size_hint(x.len()).unwrap_or(u128::MAX))?;
            x.check_powerset_budget(&Budget::new(u128::MAX))?;
            let cap = self.cap(x.len()) as u32;
            let mut out = Vec::new();
            for mask in 1..=x.full_mask() {
                if mask.count_ones() > cap {
                    continue;
                }
                let s = x.subset_value(mask);
                let members = s.expect_set()?;
                for a in members {
                    for b in members {
                        out.push(Value::bip(members.iter().cloned(), a.clone(), b.clone())?);
                    }
                }
            }
            Ok(FinSet::new(name, out))
        })
    }

    fn fmap(&self, f: &Arrow, t: &Value) -> Result<Value> {
        let b = t.expect_bip()?;
        let imgs = b.set.iter().map(|v| f.apply(v)).collect::<Result<Vec<_>>>()?;
        Value::bip(imgs, f.apply(&b.first)?, f.apply(&b.second)?)
    }

    fn sample(&self, x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value> {
        let n = x.len();
        if n == 0 {
            return Err(Error::InvalidStructure("NB(∅) is empty".into()));
        }
        let k = rng.gen_range(1..=self.cap(n).min(5));
        let members: Vec<Value> = sample_indices(rng, n, k)
            .into_iter()
            .map(|i| x.elements()[i].clone())
            .collect();
        let a = members[rng.gen_range(0..k)].clone();
        let b = members[rng.gen_range(0..k)].clone();
        Value::bip(members, a, b)
    }

    fn budget(&self) -> Budget {
        self.budget
    }
}

impl Monad for NormalBand {
    fn unit(&self, _x: &FinSet, v: &Value) -> Result<Value> {
        Value::bip([v.clone()], v.clone(), v.clone())
    }

    fn mult(&self, _x: &FinSet, t: &Value) -> Result<Value> {
        let outer = t.expect_bip()?;
        let mut all = Vec::new();
        for inner in outer.set.iter() {
            all.extend(inner.expect_bip()?.set.iter().cloned());
        }
        let u = Value::set(all);
        let len = u.expect_set()?.len();
        if let Some(d) = self.degree {
            if len > d {
                return Err(Error::OutOfRange {
                    degree: d,
                    what: format!("union of size {len}"),
                });
            }
        }
        let first = outer.first.expect_bip()?.first.clone();
        let second = outer.second.expect_bip()?.second.clone();
        Value::bip(u.expect_set()?.iter().cloned(), first, second)
    }

    fn truncation(&self) -> Option<usize> {
        self.degree
    }
}

/// Evaluates a nonempty word in the free normal band: `x₁…xₙ ↦ ({x₁…xₙ}, x₁, xₙ)`.
pub fn evaluate_word(word: &[Value]) -> Result<Value> {
    match (word.first(), word.last()) {
        (Some(a), Some(b)) => Value::bip(word.iter().cloned(), a.clone(), b.clone()),
        _ => Err(Error::InvalidValue("the empty word has no value in a band".into())),
    }
}

/// The band product `(A,a,b)·(B,c,d) = (A ∪ B, a, d)`.
pub fn band_product(l: &Value, r: &Value) -> Result<Value> {
    let (l, r) = (l.expect_bip()?, r.expect_bip()?);
    Value::bip(
        l.set.iter().chain(r.set.iter()).cloned(),
        l.first.clone(),
        r.second.clone(),
    )
}
