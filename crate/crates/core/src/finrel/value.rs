//! Canonical hereditarily finite values.
//!
//! Every carrier in the crate draws its elements from [`Value`]. Children are
//! kept in canonical order at construction, so structural equality is equality
//! of the stored form. Children live behind `Arc` so large families (an
//! ultrafilter on a 16-element set has 32768 members) share their subsets.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone)]
pub enum Value {
    Atom(Arc<str>),
    /// Strictly increasing children.
    Set(Arc<[Value]>),
    /// Non-decreasing children; multiplicity is the number of repeats.
    Multiset(Arc<[Value]>),
    Pair(Arc<(Value, Value)>),
    /// A set with two chosen members (first point, second point).
    Bip(Arc<Bipointed>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bipointed {
    pub set: Arc<[Value]>,
    pub first: Value,
    pub second: Value,
}

impl Value {
    fn tag(&self) -> u8 {
        match self {
            Value::Atom(_) => 0,
            Value::Set(_) => 1,
            Value::Multiset(_) => 2,
            Value::Pair(_) => 3,
            Value::Bip(_) => 4,
        }
    }

    pub fn atom(label: impl AsRef<str>) -> Value {
        Value::Atom(Arc::from(label.as_ref()))
    }

    /// Builds a set, sorting and removing duplicates.
    pub fn set<I: IntoIterator<Item = Value>>(items: I) -> Value {
        let mut v: Vec<Value> = items.into_iter().collect();
        v.sort();
        v.dedup();
        Value::Set(v.into())
    }

    /// Builds a set from children already strictly increasing.
    pub fn set_sorted(items: Vec<Value>) -> Value {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Value::Set(items.into())
    }

    pub fn empty_set() -> Value {
        Value::Set(Arc::from(Vec::new()))
    }

    pub fn multiset<I: IntoIterator<Item = Value>>(items: I) -> Value {
        let mut v: Vec<Value> = items.into_iter().collect();
        v.sort();
        Value::Multiset(v.into())
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Arc::new((a, b)))
    }

    /// Builds a bipointed set; both points must lie in the set.
    pub fn bip<I: IntoIterator<Item = Value>>(items: I, first: Value, second: Value) -> Result<Value> {
        let set = match Value::set(items) {
            Value::Set(s) => s,
            _ => unreachable!(),
        };
        if set.binary_search(&first).is_err() || set.binary_search(&second).is_err() {
            return Err(Error::InvalidValue(format!(
                "bipointed points {first}, {second} must be members of the set"
            )));
        }
        Ok(Value::Bip(Arc::new(Bipointed { set, first, second })))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Value::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&[Value]> {
        match self {
            Value::Set(s) => Some(s),
            _ => None,
        }
    }

    pub fn expect_set(&self) -> Result<&[Value]> {
        self.as_set()
            .ok_or_else(|| Error::InvalidValue(format!("expected a set, got {self}")))
    }

    pub fn as_multiset(&self) -> Option<&[Value]> {
        match self {
            Value::Multiset(s) => Some(s),
            _ => None,
        }
    }

    pub fn expect_multiset(&self) -> Result<&[Value]> {
        self.as_multiset()
            .ok_or_else(|| Error::InvalidValue(format!("expected a multiset, got {self}")))
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn as_bip(&self) -> Option<&Bipointed> {
        match self {
            Value::Bip(b) => Some(b),
            _ => None,
        }
    }

    pub fn expect_bip(&self) -> Result<&Bipointed> {
        self.as_bip()
            .ok_or_else(|| Error::InvalidValue(format!("expected a bipointed set, got {self}")))
    }

    /// Membership in a set value (binary search over canonical children).
    pub fn contains(&self, v: &Value) -> bool {
        match self {
            Value::Set(s) => s.binary_search(v).is_ok(),
            Value::Multiset(s) => s.binary_search(v).is_ok(),
            _ => false,
        }
    }

    /// Union of a collection of set values.
    pub fn union_all<'a, I: IntoIterator<Item = &'a Value>>(sets: I) -> Result<Value> {
        let mut out = Vec::new();
        for s in sets {
            out.extend_from_slice(s.expect_set()?);
        }
        Ok(Value::set(out))
    }

    pub fn is_subset(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Set(a), Value::Set(_)) => a.iter().all(|x| other.contains(x)),
            _ => false,
        }
    }

    /// Node count of the value tree; orders instances from small to large.
    pub fn weight(&self) -> usize {
        match self {
            Value::Atom(_) => 1,
            Value::Set(s) | Value::Multiset(s) => 1 + s.iter().map(Value::weight).sum::<usize>(),
            Value::Pair(p) => 1 + p.0.weight() + p.1.weight(),
            Value::Bip(b) => 1 + b.set.iter().map(Value::weight).sum::<usize>() + b.first.weight() + b.second.weight(),
        }
    }

    /// Checks the canonical-form invariants recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            Value::Atom(_) => Ok(()),
            Value::Set(s) => {
                if !s.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::InvalidValue("set children not strictly sorted".into()));
                }
                s.iter().try_for_each(Value::validate)
            }
            Value::Multiset(s) => {
                if !s.windows(2).all(|w| w[0] <= w[1]) {
                    return Err(Error::InvalidValue("multiset children not sorted".into()));
                }
                s.iter().try_for_each(Value::validate)
            }
            Value::Pair(p) => {
                p.0.validate()?;
                p.1.validate()
            }
            Value::Bip(b) => {
                Value::Set(b.set.clone()).validate()?;
                if b.set.binary_search(&b.first).is_err() || b.set.binary_search(&b.second).is_err() {
                    return Err(Error::InvalidValue("bipointed point outside its set".into()));
                }
                Ok(())
            }
        }
    }
}

fn slices_eq(a: &Arc<[Value]>, b: &Arc<[Value]>) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Atom(a), Value::Atom(b)) => a == b,
            (Value::Set(a), Value::Set(b)) => slices_eq(a, b),
            (Value::Multiset(a), Value::Multiset(b)) => slices_eq(a, b),
            (Value::Pair(a), Value::Pair(b)) => Arc::ptr_eq(a, b) || a == b,
            (Value::Bip(a), Value::Bip(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Eq for Value {}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Atom(a), Value::Atom(b)) => a.cmp(b),
            (Value::Set(a), Value::Set(b)) | (Value::Multiset(a), Value::Multiset(b)) => {
                if Arc::ptr_eq(a, b) {
                    Ordering::Equal
                } else {
                    a[..].cmp(&b[..])
                }
            }
            (Value::Pair(a), Value::Pair(b)) => a.cmp(b),
            (Value::Bip(a), Value::Bip(b)) => a.cmp(b),
            _ => self.tag().cmp(&other.tag()),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.tag().hash(state);
        match self {
            Value::Atom(a) => a.hash(state),
            Value::Set(s) | Value::Multiset(s) => s[..].hash(state),
            Value::Pair(p) => p.hash(state),
            Value::Bip(b) => b.hash(state),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, open: &str, close: &str, items: &[Value]) -> fmt::Result {
    f.write_str(open)?;
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str(close)
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(a) => f.write_str(a),
            Value::Set(s) => write_list(f, "{", "}", s),
            Value::Multiset(s) => write_list(f, "[", "]", s),
            Value::Pair(p) => write!(f, "({},{})", p.0, p.1),
            Value::Bip(b) => {
                write_list(f, "(", "", &b.set)?;
                write!(f, ";{},{})", b.first, b.second)
            }
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
