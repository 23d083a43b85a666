use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Budget, Error, Result};
use crate::finrel::{Arrow, FinSet, Value};
use crate::monadkit::{Functor, Memo, Monad};

pub(crate) fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Multisets of size at most `degree`, with `μ` adding multiplicities.
///
/// Flattening can exceed the degree; `mult` then reports out-of-range and
/// law checks skip that instance.
pub struct Multiset {
    degree: usize,
    budget: Budget,
    cache: Memo<FinSet>,
}

impl Multiset {
    pub fn new(degree: usize, budget: Budget) -> Multiset {
        Multiset {
            degree,
            budget,
            cache: Memo::default(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn out_of_range(&self, len: usize) -> Error {
        Error::OutOfRange {
            degree: self.degree,
            what: format!("multiset of size {len}"),
        }
    }
}

fn extend(x: &FinSet, from: usize, left: usize, cur: &mut Vec<Value>, out: &mut Vec<Value>) {
    out.push(Value::multiset(cur.iter().cloned()));
    if left == 0 {
        return;
    }
    for i in from..x.len() {
        cur.push(x.elements()[i].clone());
        extend(x, i, left - 1, cur, out);
        cur.pop();
    }
}

impl Functor for Multiset {
    fn name(&self) -> String {
        format!("multiset({})", self.degree)
    }

    fn size_hint(&self, n: usize) -> Option<u128> {
        let mut total: u128 = 0;
        for k in 0..=self.degree as u128 {
            let c = if n == 0 {
                u128::from(k == 0)
            } else {
                binom(n as u128 + k - 1, k)
            };
            total = total.saturating_add(c);
        }
        Some(total)
    }

    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        self.cache.get_or_try(x, || {
            let name = format!("M{}({})", self.degree, x.name());
            self.budget.check(|| name.clone(), self.size_hint(x.len()).unwrap_or(u128::MAX))?;
            let mut out = Vec::new();
            extend(x, 0, self.degree, &mut Vec::new(), &mut out);
            Ok(FinSet::new(name, out))
        })
    }

    fn fmap(&self, f: &Arrow, t: &Value) -> Result<Value> {
        let imgs = t.expect_multiset()?.iter().map(|v| f.apply(v)).collect::<Result<Vec<_>>>()?;
        Ok(Value::multiset(imgs))
    }

    fn sample(&self, x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value> {
        let k = if x.is_empty() { 0 } else { rng.gen_range(0..=self.degree) };
        Ok(Value::multiset(
            (0..k).map(|_| x.elements()[rng.gen_range(0..x.len())].clone()),
        ))
    }

    fn budget(&self) -> Budget {
        self.budget
    }
}

impl Monad for Multiset {
    fn unit(&self, _x: &FinSet, v: &Value) -> Result<Value> {
        if self.degree == 0 {
            return Err(self.out_of_range(1));
        }
        Ok(Value::multiset([v.clone()]))
    }

    fn mult(&self, _x: &FinSet, t: &Value) -> Result<Value> {
        let mut all = Vec::new();
        for m in t.expect_multiset()? {
            all.extend(m.expect_multiset()?.iter().cloned());
        }
        if all.len() > self.degree {
            return Err(self.out_of_range(all.len()));
        }
        Ok(Value::multiset(all))
    }

    fn truncation(&self) -> Option<usize> {
        Some(self.degree)
    }
}
