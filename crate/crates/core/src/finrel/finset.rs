use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Budget, Error, Result};
use crate::finrel::Value;

/// A finite carrier: a canonically ordered, duplicate-free list of values.
///
/// Equality ignores the display name; two carriers are the same object when
/// their element lists agree.
#[derive(Clone)]
pub struct FinSet {
    name: Arc<str>,
    elements: Arc<[Value]>,
    fingerprint: u64,
}

impl FinSet {
    pub fn new<I: IntoIterator<Item = Value>>(name: impl AsRef<str>, items: I) -> FinSet {
        let mut v: Vec<Value> = items.into_iter().collect();
        v.sort();
        v.dedup();
        Self::from_sorted(name, v)
    }

    pub fn from_sorted(name: impl AsRef<str>, items: Vec<Value>) -> FinSet {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        let mut h = DefaultHasher::new();
        items.len().hash(&mut h);
        for v in &items {
            v.hash(&mut h);
        }
        FinSet {
            name: Arc::from(name.as_ref()),
            elements: items.into(),
            fingerprint: h.finish(),
        }
    }

    /// The carrier `{0, 1, ..., n-1}` of atoms.
    pub fn standard(n: usize) -> FinSet {
        FinSet::new(n.to_string(), (0..n).map(|i| Value::atom(i.to_string())))
    }

    /// A carrier of atoms with the given labels.
    pub fn atoms(name: impl AsRef<str>, labels: &[&str]) -> FinSet {
        FinSet::new(name, labels.iter().map(Value::atom))
    }

    pub fn empty() -> FinSet {
        FinSet::standard(0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl AsRef<str>) -> FinSet {
        FinSet {
            name: Arc::from(name.as_ref()),
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Value] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Value> {
        self.elements.iter()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn index_of(&self, v: &Value) -> Option<usize> {
        self.elements.binary_search(v).ok()
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.index_of(v).is_some()
    }

    pub fn index_or_err(&self, v: &Value) -> Result<usize> {
        self.index_of(v).ok_or_else(|| Error::NotAnElement {
            value: v.to_string(),
            carrier: self.name.to_string(),
        })
    }

    pub fn require_same(&self, other: &FinSet, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::mismatch(format!(
                "{what}: carrier {} differs from {}",
                self.name, other.name
            )))
        }
    }

    /// The subset of this carrier selected by `mask` (bit i = element i).
    pub fn subset_value(&self, mask: u64) -> Value {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out.push(self.elements[i].clone());
            m &= m - 1;
        }
        Value::set_sorted(out)
    }

    /// Bit mask of a set value whose members lie in this carrier.
    pub fn mask_of(&self, set: &Value) -> Result<u64> {
        if self.len() > 64 {
            return Err(Error::budget(format!("bit masks over {}", self.name), self.len() as u128, 64));
        }
        let mut mask = 0u64;
        for v in set.expect_set()? {
            mask |= 1u64 << self.index_or_err(v)?;
        }
        Ok(mask)
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() >= 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// Fails unless all 2^n subsets fit the budget.
    pub fn check_powerset_budget(&self, budget: &Budget) -> Result<()> {
        let n = self.len();
        if n >= 64 {
            return Err(Error::budget(format!("subsets of {}", self.name), u128::MAX, budget.max_elements));
        }
        budget.check(|| format!("subsets of {}", self.name), 1u128 << n)
    }

    /// All subsets as set values, indexed by mask.
    pub fn subsets_by_mask(&self, budget: &Budget) -> Result<Vec<Value>> {
        self.check_powerset_budget(budget)?;
        Ok((0..(1u64 << self.len())).map(|m| self.subset_value(m)).collect())
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
            && (Arc::ptr_eq(&self.elements, &other.elements) || self.elements == other.elements)
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, Value::Set(self.elements.clone()))
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_round_trip() {
        let x = FinSet::standard(3);
        let s = x.subset_value(0b101);
        assert_eq!(s, Value::set([Value::atom("0"), Value::atom("2")]));
        assert_eq!(x.mask_of(&s).unwrap(), 0b101);
    }

    #[test]
    fn equality_ignores_name() {
        let a = FinSet::atoms("A", &["x", "y"]);
        let b = FinSet::atoms("B", &["y", "x"]);
        assert_eq!(a, b);
        assert_ne!(a, FinSet::standard(2));
    }

    #[test]
    fn powerset_budget_guard() {
        let x = FinSet::standard(5);
        assert!(x.subsets_by_mask(&Budget::new(16)).unwrap_err().is_budget());
        assert_eq!(x.subsets_by_mask(&Budget::new(32)).unwrap().len(), 32);
    }
}
