use std::fmt;
use std::sync::Arc;

use crate::error::{Budget, Error, Result};
use crate::finrel::{FinFn, FinSet, Value};
use crate::report::{LawReport, Witness};

/// A relation `R ⊆ dom × cod`, stored as a sorted duplicate-free pair list.
#[derive(Clone, PartialEq, Eq)]
pub struct FinRel {
    dom: FinSet,
    cod: FinSet,
    pairs: Arc<[(Value, Value)]>,
}

impl FinRel {
    pub fn new<I: IntoIterator<Item = (Value, Value)>>(dom: &FinSet, cod: &FinSet, pairs: I) -> Result<FinRel> {
        let mut v: Vec<(Value, Value)> = pairs.into_iter().collect();
        for (a, b) in &v {
            dom.index_or_err(a)?;
            cod.index_or_err(b)?;
        }
        v.sort();
        v.dedup();
        Ok(FinRel {
            dom: dom.clone(),
            cod: cod.clone(),
            pairs: v.into(),
        })
    }

    fn from_sorted(dom: &FinSet, cod: &FinSet, v: Vec<(Value, Value)>) -> FinRel {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        FinRel {
            dom: dom.clone(),
            cod: cod.clone(),
            pairs: v.into(),
        }
    }

    /// The relation `{(x, y) : pred(x, y)}`.
    pub fn from_predicate(dom: &FinSet, cod: &FinSet, mut pred: impl FnMut(&Value, &Value) -> Result<bool>) -> Result<FinRel> {
        let mut v = Vec::new();
        for a in dom.iter() {
            for b in cod.iter() {
                if pred(a, b)? {
                    v.push((a.clone(), b.clone()));
                }
            }
        }
        Ok(FinRel::from_sorted(dom, cod, v))
    }

    pub fn empty(dom: &FinSet, cod: &FinSet) -> FinRel {
        FinRel::from_sorted(dom, cod, Vec::new())
    }

    pub fn identity(x: &FinSet) -> FinRel {
        FinRel::from_sorted(x, x, x.iter().map(|a| (a.clone(), a.clone())).collect())
    }

    pub fn total(dom: &FinSet, cod: &FinSet) -> FinRel {
        FinRel::from_predicate(dom, cod, |_, _| Ok(true)).expect("total relation")
    }

    /// The relation whose bit `i * |cod| + j` records `(dom[i], cod[j])`.
    pub fn from_mask(dom: &FinSet, cod: &FinSet, mask: u64) -> FinRel {
        let m = cod.len();
        let mut v = Vec::with_capacity(mask.count_ones() as usize);
        for (i, a) in dom.iter().enumerate() {
            for (j, b) in cod.iter().enumerate() {
                if mask >> (i * m + j) & 1 == 1 {
                    v.push((a.clone(), b.clone()));
                }
            }
        }
        FinRel::from_sorted(dom, cod, v)
    }

    /// Every relation between the two carriers.
    pub fn all(dom: &FinSet, cod: &FinSet, budget: &Budget) -> Result<Vec<FinRel>> {
        let bits = dom.len() * cod.len();
        if bits >= 64 {
            return Err(Error::budget("relations", u128::MAX, budget.max_elements));
        }
        budget.check(|| format!("relations {} -> {}", dom.name(), cod.name()), 1u128 << bits)?;
        Ok((0..(1u64 << bits)).map(|m| FinRel::from_mask(dom, cod, m)).collect())
    }

    pub fn graph(f: &FinFn) -> FinRel {
        let mut v: Vec<(Value, Value)> = f.pairs().map(|(a, b)| (a.clone(), b.clone())).collect();
        v.sort();
        FinRel::from_sorted(f.dom(), f.cod(), v)
    }

    pub fn cograph(f: &FinFn) -> FinRel {
        FinRel::graph(f).converse()
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn pairs(&self) -> &[(Value, Value)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn related(&self, a: &Value, b: &Value) -> bool {
        self.pairs
            .binary_search_by(|(x, y)| x.cmp(a).then_with(|| y.cmp(b)))
            .is_ok()
    }

    /// `{y : a R y}`, in codomain order.
    pub fn image_of(&self, a: &Value) -> Vec<Value> {
        let start = self.pairs.partition_point(|(x, _)| x < a);
        self.pairs[start..]
            .iter()
            .take_while(|(x, _)| x == a)
            .map(|(_, y)| y.clone())
            .collect()
    }

    /// `R(A) = {y : ∃ a ∈ A, a R y}` as a set value.
    pub fn image_of_set(&self, set: &Value) -> Result<Value> {
        let mut out = Vec::new();
        for a in set.expect_set()? {
            out.extend(self.image_of(a));
        }
        Ok(Value::set(out))
    }

    /// Relational composite: first `self`, then `s`.
    pub fn compose(&self, s: &FinRel) -> Result<FinRel> {
        self.cod.require_same(&s.dom, "relation composition")?;
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); s.dom.len()];
        for (b, c) in s.pairs.iter() {
            succ[s.dom.index_of(b).expect("validated")].push(s.cod.index_of(c).expect("validated"));
        }
        let mut out = Vec::new();
        let mut row = vec![false; s.cod.len()];
        let mut i = 0;
        while i < self.pairs.len() {
            let a = &self.pairs[i].0;
            row.iter_mut().for_each(|r| *r = false);
            while i < self.pairs.len() && &self.pairs[i].0 == a {
                let b = self.cod.index_of(&self.pairs[i].1).expect("validated");
                for &c in &succ[b] {
                    row[c] = true;
                }
                i += 1;
            }
            for (c, hit) in row.iter().enumerate() {
                if *hit {
                    out.push((a.clone(), s.cod.elements()[c].clone()));
                }
            }
        }
        Ok(FinRel::from_sorted(&self.dom, &s.cod, out))
    }

    pub fn converse(&self) -> FinRel {
        let mut v: Vec<(Value, Value)> = self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        v.sort();
        FinRel::from_sorted(&self.cod, &self.dom, v)
    }

    /// Pair-set inclusion, the order on hom-sets of relations.
    pub fn is_subset(&self, other: &FinRel) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.pairs.iter().all(|(a, b)| other.related(a, b))
    }

    /// A pair of `self` missing from `other`.
    pub fn missing_from(&self, other: &FinRel) -> Option<(Value, Value)> {
        self.pairs.iter().find(|(a, b)| !other.related(a, b)).cloned()
    }

    pub fn union(&self, other: &FinRel) -> Result<FinRel> {
        self.dom.require_same(&other.dom, "relation union")?;
        self.cod.require_same(&other.cod, "relation union")?;
        FinRel::new(&self.dom, &self.cod, self.pairs.iter().chain(other.pairs.iter()).cloned())
    }

    /// The span `dom <-p- |R| -q-> cod` whose apex is the set of pairs.
    pub fn tabulate(&self) -> (FinFn, FinFn) {
        let apex = FinSet::new(
            format!("|{}⇸{}|", self.dom.name(), self.cod.name()),
            self.pairs.iter().map(|(a, b)| Value::pair(a.clone(), b.clone())),
        );
        let p = FinFn::new(&apex, &self.dom, |v| Ok(v.as_pair().expect("pair").0.clone())).expect("projection");
        let q = FinFn::new(&apex, &self.cod, |v| Ok(v.as_pair().expect("pair").1.clone())).expect("projection");
        (p, q)
    }

    /// The relation as a map `dom -> P(cod)`.
    pub fn as_set_valued(&self, x: &Value) -> Value {
        Value::set_sorted(self.image_of(x))
    }

    pub fn is_total(&self) -> bool {
        self.dom.iter().all(|a| !self.image_of(a).is_empty())
    }
}

impl fmt::Debug for FinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⇸ {} {{", self.dom.name(), self.cod.name())?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("}")
    }
}

/// Checks `1 ⊆ f^*f_*` and `f_*f^* ⊆ 1`.
pub fn check_adjunction(f: &FinFn) -> LawReport {
    let name = "adjunction f_* ⊣ f^*";
    let anchor = "f_* is left adjoint to f^*";
    let lower = FinRel::graph(f);
    let upper = FinRel::cograph(f);
    let unit = lower.compose(&upper).expect("carriers align");
    let counit = upper.compose(&lower).expect("carriers align");
    let checked = (f.dom().len() + counit.len()) as u64;
    if let Some((a, b)) = FinRel::identity(f.dom()).missing_from(&unit) {
        return LawReport::fail(name, anchor, checked, Witness::new("unit: identity pair missing from f^*f_*", Value::pair(a, b)));
    }
    if let Some((a, b)) = counit.missing_from(&FinRel::identity(f.cod())) {
        return LawReport::fail(name, anchor, checked, Witness::new("counit: f_*f^* pair outside identity", Value::pair(a, b)));
    }
    LawReport::pass(name, anchor, checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Value {
        Value::atom(s)
    }

    fn x() -> FinSet {
        FinSet::standard(2)
    }

    fn y() -> FinSet {
        FinSet::atoms("Y", &["a", "b"])
    }

    fn z() -> FinSet {
        FinSet::atoms("Z", &["q"])
    }

    #[test]
    fn one_step_chase() {
        let r = FinRel::new(&x(), &y(), [(at("0"), at("a"))]).unwrap();
        let s = FinRel::new(&y(), &z(), [(at("a"), at("q"))]).unwrap();
        let rs = r.compose(&s).unwrap();
        assert_eq!(rs.pairs(), &[(at("0"), at("q"))]);
    }

    #[test]
    fn witness_enumeration() {
        let r = FinRel::new(&x(), &y(), [(at("0"), at("a")), (at("0"), at("b"))]).unwrap();
        let s = FinRel::new(&y(), &z(), [(at("b"), at("q"))]).unwrap();
        assert_eq!(r.compose(&s).unwrap().pairs(), &[(at("0"), at("q"))]);
    }

    #[test]
    fn identity_is_unit() {
        let s = FinRel::new(&y(), &z(), [(at("b"), at("q"))]).unwrap();
        assert_eq!(FinRel::identity(&y()).compose(&s).unwrap(), s);
        assert!(FinRel::identity(&x()).compose(&s).is_err());
    }

    #[test]
    fn graph_and_cograph() {
        let f = FinFn::constant(&x(), &FinSet::atoms("A", &["a"]), &at("a")).unwrap();
        assert_eq!(FinRel::graph(&f).pairs(), &[(at("0"), at("a")), (at("1"), at("a"))]);
        assert_eq!(FinRel::cograph(&f).pairs(), &[(at("a"), at("0")), (at("a"), at("1"))]);
        assert_eq!(FinRel::graph(&FinFn::identity(&x())), FinRel::identity(&x()));
    }

    #[test]
    fn tabulation_round_trips() {
        let r = FinRel::new(&x(), &y(), [(at("0"), at("a"))]).unwrap();
        let (p, q) = r.tabulate();
        assert_eq!(p.dom().len(), 1);
        assert_eq!(p.apply(&Value::pair(at("0"), at("a"))).unwrap(), at("0"));
        assert_eq!(q.apply(&Value::pair(at("0"), at("a"))).unwrap(), at("a"));
        let back = FinRel::cograph(&p).compose(&FinRel::graph(&q)).unwrap();
        assert_eq!(back, r);
        let e = FinRel::empty(&x(), &y());
        assert_eq!(e.tabulate().0.dom().len(), 0);
    }

    #[test]
    fn constant_map_adjunction() {
        let f = FinFn::constant(&x(), &y(), &at("a")).unwrap();
        let r = check_adjunction(&f);
        assert!(r.is_pass());
        let counit = FinRel::cograph(&f).compose(&FinRel::graph(&f)).unwrap();
        assert_eq!(counit.pairs(), &[(at("a"), at("a"))]);
    }
}
