use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Budget, Error, Result};
use crate::finrel::{FinFn, FinSet, Value};
use crate::lawengine::{lifting_from_law, p_over_multiset, p_over_normalband, pf_over_p, weak_lift, DeltaAlgebra, DistLaw, Lifted};
use crate::monadkit::{AlgebraSpec, CheckConfig, Functor, MonadRef};
use crate::report::{LawReport, Witness};
use crate::showcase::FinLattice;
use crate::zoo::{evaluate_word, Multiset, NormalBand};

/// A finite commutative monoid by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommMonoid {
    carrier: FinSet,
    unit: usize,
    table: Vec<Vec<usize>>,
}

impl CommMonoid {
    pub fn new(carrier: &FinSet, unit: usize, table: Vec<Vec<usize>>) -> Result<CommMonoid> {
        let n = carrier.len();
        if unit >= n || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= n)) {
            return Err(Error::InvalidStructure("monoid table does not match the carrier".into()));
        }
        let e = |i: usize| carrier.elements()[i].to_string();
        for a in 0..n {
            if table[unit][a] != a {
                return Err(Error::InvalidStructure(format!("{} is not a unit at {}", e(unit), e(a))));
            }
            for b in 0..n {
                if table[a][b] != table[b][a] {
                    return Err(Error::InvalidStructure(format!("{}·{} ≠ {}·{}", e(a), e(b), e(b), e(a))));
                }
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidStructure(format!("not associative at {}, {}, {}", e(a), e(b), e(c))));
                    }
                }
            }
        }
        Ok(CommMonoid {
            carrier: carrier.clone(),
            unit,
            table,
        })
    }

    /// `(Zₙ, +)`.
    pub fn cyclic(n: usize) -> CommMonoid {
        let x = FinSet::standard(n);
        let idx = numeric_index(&x);
        let pos: Vec<usize> = (0..n).map(|k| idx.iter().position(|&i| i == k).expect("standard carrier")).collect();
        let table = (0..n).map(|a| (0..n).map(|b| pos[(idx[a] + idx[b]) % n]).collect()).collect();
        CommMonoid::new(&x, pos[0], table).expect("cyclic groups are commutative monoids")
    }

    /// Every commutative monoid on `{0, …, n-1}` with unit `0`; every
    /// commutative monoid of size `n` is isomorphic to one of them.
    pub fn all(n: usize) -> Vec<CommMonoid> {
        if n == 0 {
            return vec![];
        }
        let x = FinSet::standard(n);
        let idx = numeric_index(&x);
        let pos: Vec<usize> = (0..n).map(|k| idx.iter().position(|&i| i == k).expect("standard carrier")).collect();
        let cells: Vec<(usize, usize)> = (1..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let count = (n as u64).pow(cells.len() as u32);
        let mut out = Vec::new();
        for code in 0..count {
            let mut num = vec![vec![0usize; n]; n];
            for (i, row) in num.iter_mut().enumerate() {
                row[0] = i;
            }
            for j in 0..n {
                num[0][j] = j;
            }
            let mut c = code;
            for &(i, j) in &cells {
                let v = (c % n as u64) as usize;
                c /= n as u64;
                num[i][j] = v;
                num[j][i] = v;
            }
            let table = (0..n).map(|a| (0..n).map(|b| pos[num[idx[a]][idx[b]]]).collect()).collect();
            if let Ok(m) = CommMonoid::new(&x, pos[0], table) {
                out.push(m);
            }
        }
        out
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn unit(&self) -> &Value {
        &self.carrier.elements()[self.unit]
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        let (i, j) = (self.carrier.index_or_err(a)?, self.carrier.index_or_err(b)?);
        Ok(self.carrier.elements()[self.table[i][j]].clone())
    }

    /// `A·B = {ab : a ∈ A, b ∈ B}`.
    pub fn set_product(&self, a: &Value, b: &Value) -> Result<Value> {
        let mut out = Vec::new();
        for p in a.expect_set()? {
            for q in b.expect_set()? {
                out.push(self.mul(p, q)?);
            }
        }
        Ok(Value::set(out))
    }

    /// The monoid as an algebra of the bounded multiset monad.
    pub fn multiset_algebra(&self, degree: usize) -> Result<AlgebraSpec> {
        let m: MonadRef = Arc::new(Multiset::new(degree, Budget::default()));
        let tx = m.obj(&self.carrier)?;
        let act = FinFn::new(&tx, &self.carrier, |v| {
            v.expect_multiset()?.iter().try_fold(self.unit().clone(), |acc, p| self.mul(&acc, p))
        })?;
        AlgebraSpec::from_fn(&m, &act)
    }
}

fn numeric_index(x: &FinSet) -> Vec<usize> {
    x.iter().map(|v| v.as_atom().and_then(|s| s.parse().ok()).unwrap_or(0)).collect()
}

fn triples(px: &[Value], mut f: impl FnMut(&Value, &Value, &Value) -> Result<Option<Witness>>) -> Result<(u64, Option<Witness>)> {
    let mut n = 0;
    for a in px {
        for b in px {
            for c in px {
                n += 1;
                if let Some(w) = f(a, b, c)? {
                    return Ok((n, Some(w)));
                }
            }
        }
    }
    Ok((n, None))
}

fn report_from(name: &str, anchor: &str, res: (u64, Option<Witness>)) -> LawReport {
    match res {
        (n, None) => LawReport::pass(name, anchor, n),
        (n, Some(w)) => LawReport::fail(name, anchor, n, w),
    }
}

fn triple(a: &Value, b: &Value, c: &Value) -> Value {
    Value::pair(a.clone(), Value::pair(b.clone(), c.clone()))
}

/// The lifted monoid on `PX` with unit `{1}` and `A·B = {ab}`, checked to be
/// a commutative unital quantale, and compared with the lifting of the
/// multiset law.
pub fn quantale_demo(m: &CommMonoid) -> Result<LawReport> {
    let name = format!("quantale on P({})", m.carrier().name());
    let anchor = "commutative monoids lift to commutative unital quantales";
    let budget = Budget::default();
    let px: Vec<Value> = m.carrier().subsets_by_mask(&budget)?;
    let one = Value::set([m.unit().clone()]);
    let prod = |a: &Value, b: &Value| m.set_product(a, b);
    let mut children = Vec::new();

    children.push(report_from(
        "associative",
        "(A·B)·C = A·(B·C)",
        triples(&px, |a, b, c| {
            let (l, r) = (prod(&prod(a, b)?, c)?, prod(a, &prod(b, c)?)?);
            Ok((l != r).then(|| Witness::paths("(A·B)·C ≠ A·(B·C)", triple(a, b, c), l, r)))
        })?,
    ));
    let mut unit = LawReport::pass("unit {1}", "{1}·A = A", 0);
    let mut comm = LawReport::pass("commutative", "A·B = B·A", 0);
    let mut empty = LawReport::pass("empty sup preserved", "A·∅ = ∅", 0);
    for a in &px {
        unit.checked += 1;
        let l = prod(&one, a)?;
        if l != *a && !unit.is_fail() {
            unit.set_fail(Witness::paths("{1}·A ≠ A", a.clone(), l, a.clone()));
        }
        empty.checked += 1;
        let z = prod(a, &Value::empty_set())?;
        if z != Value::empty_set() && !empty.is_fail() {
            empty.set_fail(Witness::paths("A·∅ ≠ ∅", a.clone(), z, Value::empty_set()));
        }
        for b in &px {
            comm.checked += 1;
            let (l, r) = (prod(a, b)?, prod(b, a)?);
            if l != r && !comm.is_fail() {
                comm.set_fail(Witness::paths("A·B ≠ B·A", Value::pair(a.clone(), b.clone()), l, r));
            }
        }
    }
    children.extend([unit, comm, empty]);
    children.push(report_from(
        "binary sups preserved",
        "A·(B ∪ C) = A·B ∪ A·C",
        triples(&px, |a, b, c| {
            let l = prod(a, &Value::union_all([b, c])?)?;
            let r = Value::union_all([&prod(a, b)?, &prod(a, c)?])?;
            Ok((l != r).then(|| Witness::paths("A·(B∪C) ≠ A·B ∪ A·C", triple(a, b, c), l, r)))
        })?,
    ));

    // the lifted multiset algebra on PX, read on products of length ≤ 2
    let law = p_over_multiset(2, budget);
    let lifted = lifting_from_law(&law, &m.multiset_algebra(2)?)?;
    let mut agree = LawReport::pass("agrees with the lifting", "A·B read off the lifted algebra", 0);
    let mut cases = vec![(Value::multiset([]), one.clone())];
    for a in &px {
        for b in &px {
            cases.push((Value::multiset([a.clone(), b.clone()]), prod(a, b)?));
        }
    }
    for (w, want) in cases {
        agree.checked += 1;
        let got = lifted.act(&w)?;
        if got != want {
            agree.set_fail(Witness::paths("lifted action ≠ A·B", w, got, want));
            break;
        }
    }
    children.push(agree);
    Ok(LawReport::group(name, anchor, children).with_fact("carrier", px.len()))
}

fn closed_subsets(x: &FinSet, mul: &dyn Fn(&Value, &Value) -> Result<Value>) -> Result<Vec<Value>> {
    let mut out = Vec::new();
    for s in x.subsets_by_mask(&Budget::default())? {
        let els = s.expect_set()?;
        let mut closed = true;
        'outer: for a in els {
            for b in els {
                if !s.contains(&mul(a, b)?) {
                    closed = false;
                    break 'outer;
                }
            }
        }
        if closed {
            out.push(s);
        }
    }
    Ok(out)
}

/// Subsets of a meet-semilattice closed under binary meets, `∅` included.
pub fn subsemigroups(l: &FinLattice) -> Result<Vec<Value>> {
    closed_subsets(l.carrier(), &|a, b| Ok(l.element(l.meet(l.index(a)?, l.index(b)?)).clone()))
}

fn lifted_index(l: &Lifted) -> HashMap<Value, Value> {
    l.iota.pairs().map(|(k, v)| (v.clone(), k.clone())).collect()
}

fn lifted_pair_product(
    l: &Lifted,
    back: &HashMap<Value, Value>,
    word: impl Fn(&Value, &Value) -> Result<Value>,
    a: &Value,
    b: &Value,
) -> Result<Value> {
    let (ka, kb) = (
        back.get(a).ok_or_else(|| Error::mismatch(format!("{a} is not in the lifted carrier")))?,
        back.get(b).ok_or_else(|| Error::mismatch(format!("{b} is not in the lifted carrier")))?,
    );
    l.iota.apply(&l.algebra.act(&word(ka, kb)?)?)
}

/// The weak lifting of `P` to a meet-semilattice (as a `P_f`-algebra):
/// its carrier against the independently listed subsemigroups, and its
/// binary product against `A·B = {a∧b}` and against the unsimplified
/// formula over all finite products meeting both sides.
pub fn subsemigroup_demo(l: &FinLattice) -> Result<LawReport> {
    let name = format!("subsemigroups of {}", l.carrier().name());
    let anchor = "P̃ sends a semilattice to its subsemigroups under A·B = {ab}";
    let budget = Budget::default();
    let x = l.carrier();
    let law = pf_over_p(budget);
    let pf: MonadRef = law.t().clone();
    let px = pf.obj(x)?;
    let meet_all = |s: &Value| -> Result<Value> {
        let mut acc = l.top();
        for v in s.expect_set()? {
            acc = l.meet(acc, l.index(v)?);
        }
        Ok(l.element(acc).clone())
    };
    let a = AlgebraSpec::from_fn(&pf, &FinFn::new(&px, x, meet_all)?)?;
    let lifted = weak_lift(&law, &a)?;
    let subs = subsemigroups(l)?;
    let got = Value::set(lifted.iota.images().iter().cloned());
    let want = Value::set(subs.iter().cloned());
    let mut car = LawReport::pass("lifted carrier is the subsemigroups", "P•X, the subsets closed under products", 1)
        .with_fact("subsemigroups", subs.len());
    if got != want {
        car.set_fail(Witness::paths("lifted carrier differs", Value::atom(x.name()), got, want));
    }

    let back = lifted_index(&lifted);
    let meet = |p: &Value, q: &Value| -> Result<Value> { Ok(l.element(l.meet(l.index(p)?, l.index(q)?)).clone()) };
    let eq18 = |p: &Value, q: &Value| -> Result<Value> {
        let mut out = Vec::new();
        for s in p.expect_set()? {
            for t in q.expect_set()? {
                out.push(meet(s, t)?);
            }
        }
        Ok(Value::set(out))
    };
    // products of finitely many elements, each from A or B, using both
    let full = |p: &Value, q: &Value| -> Result<Value> {
        let u = Value::union_all([p, q])?;
        let us = FinSet::new("A∪B", u.expect_set()?.iter().cloned());
        let mut out = Vec::new();
        for c in us.subsets_by_mask(&budget)? {
            let cs = c.expect_set()?;
            if cs.iter().any(|v| p.contains(v)) && cs.iter().any(|v| q.contains(v)) {
                out.push(meet_all(&c)?);
            }
        }
        Ok(Value::set(out))
    };
    let mut via = LawReport::pass("lifted product is the pointwise product", "A·B = {a·b : a ∈ A, b ∈ B}", 0);
    let mut unsimplified = LawReport::pass("pointwise product equals the full-products formula", "A·B over all finite products", 0);
    for p in &subs {
        for q in &subs {
            via.checked += 1;
            unsimplified.checked += 1;
            let e = eq18(p, q)?;
            let s = lifted_pair_product(&lifted, &back, |ka, kb| Ok(Value::set([ka.clone(), kb.clone()])), p, q)?;
            if s != e && !via.is_fail() {
                via.set_fail(Witness::paths("lifted A·B ≠ {a·b}", Value::pair(p.clone(), q.clone()), s, e.clone()));
            }
            let f = full(p, q)?;
            if f != e && !unsimplified.is_fail() {
                unsimplified.set_fail(Witness::paths("full products ≠ {a·b}", Value::pair(p.clone(), q.clone()), f, e));
            }
        }
    }
    let mut unit = LawReport::pass("unit is {1}", "the empty product is {1}", 1);
    let u = lifted.iota.apply(&lifted.algebra.act(&Value::empty_set())?)?;
    let top = Value::set([l.element(l.top()).clone()]);
    if u != top {
        unit.set_fail(Witness::paths("lifted unit ≠ {1}", Value::empty_set(), u, top));
    }
    Ok(LawReport::group(name, anchor, vec![car, via, unsimplified, unit]).with_fact("subsemigroups", subs.len()))
}

/// A finite normal band with its multiplication table.
#[derive(Clone, Debug)]
pub struct FinBand {
    carrier: FinSet,
    table: Vec<Vec<usize>>,
}

impl FinBand {
    pub fn new(carrier: &FinSet, mul: impl Fn(&Value, &Value) -> Result<Value>) -> Result<FinBand> {
        let xs = carrier.elements();
        let mut table = Vec::with_capacity(xs.len());
        for a in xs {
            let mut row = Vec::with_capacity(xs.len());
            for b in xs {
                row.push(carrier.index_or_err(&mul(a, b)?)?);
            }
            table.push(row);
        }
        let n = xs.len();
        let t = &table;
        for a in 0..n {
            if t[a][a] != a {
                return Err(Error::InvalidStructure(format!("{} is not idempotent", xs[a])));
            }
            for b in 0..n {
                for c in 0..n {
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        return Err(Error::InvalidStructure(format!("not associative at {}, {}, {}", xs[a], xs[b], xs[c])));
                    }
                    for d in 0..n {
                        if t[t[t[a][b]][c]][d] != t[t[t[a][c]][b]][d] {
                            return Err(Error::InvalidStructure(format!(
                                "xyzw ≠ xzyw at {}, {}, {}, {}",
                                xs[a], xs[b], xs[c], xs[d]
                            )));
                        }
                    }
                }
            }
        }
        Ok(FinBand {
            carrier: carrier.clone(),
            table,
        })
    }

    /// The free normal band on `n` generators.
    pub fn free(n: usize) -> Result<FinBand> {
        let nb = NormalBand::new(None, Budget::default());
        let x = nb.obj(&FinSet::standard(n))?.renamed(format!("NB({n})"));
        FinBand::new(&x, crate::zoo::band_product)
    }

    /// A meet-semilattice viewed as a commutative normal band.
    pub fn from_semilattice(l: &FinLattice) -> Result<FinBand> {
        FinBand::new(l.carrier(), |a, b| Ok(l.element(l.meet(l.index(a)?, l.index(b)?)).clone()))
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        let (i, j) = (self.carrier.index_or_err(a)?, self.carrier.index_or_err(b)?);
        Ok(self.carrier.elements()[self.table[i][j]].clone())
    }

    /// `(S, a, b) ↦ a·s₁⋯sₖ·b`, the value of any word with content `S`
    /// starting at `a` and ending at `b`.
    pub fn evaluate(&self, w: &Value) -> Result<Value> {
        let b = w.expect_bip()?;
        let mut acc = b.first.clone();
        for s in b.set.iter() {
            acc = self.mul(&acc, s)?;
        }
        self.mul(&acc, &b.second)
    }

    pub fn subsemigroups(&self) -> Result<Vec<Value>> {
        closed_subsets(&self.carrier, &|a, b| self.mul(a, b))
    }
}

/// The weak lifting of `P` along the normal-band law on each band: carrier
/// against the subsemigroups and the lifted product of words `AB` against
/// `A·B = {a·b}`. Bands with more elements than `degree` are lifted through the
/// untruncated law, since the splitting needs every subset of the carrier.
pub fn normal_band_demo(bands: &[FinBand], degree: usize, cfg: &CheckConfig) -> Result<LawReport> {
    let name = "normal bands";
    let anchor = "P̃ takes a normal band to its subsemigroups under A·B = {a·b}";
    let res = (|| -> Result<LawReport> {
        let mut groups = Vec::new();
        for band in bands {
            let x = band.carrier();
            let truncated = x.len() <= degree;
            let law = p_over_normalband(truncated.then_some(degree), cfg.budget);
            let t: MonadRef = law.t().clone();
            let tx = t.obj(x)?;
            let a = AlgebraSpec::from_fn(&t, &FinFn::new(&tx, x, |w| band.evaluate(w))?)?;
            let lifted = weak_lift(&law, &a)?;
            let subs = band.subsemigroups()?;
            let got = Value::set(lifted.iota.images().iter().cloned());
            let want = Value::set(subs.iter().cloned());
            let mut car = LawReport::pass("lifted carrier is the subsemigroups", "P•X", 1).with_fact("subsemigroups", subs.len());
            if got != want {
                car.set_fail(Witness::paths("lifted carrier differs", Value::atom(x.name()), got, want));
            }
            let back = lifted_index(&lifted);
            let mut op = LawReport::pass("lifted product is the pointwise product", "A·B = {a·b : a ∈ A, b ∈ B}", 0);
            for p in &subs {
                for q in &subs {
                    op.checked += 1;
                    let mut e = Vec::new();
                    for s in p.expect_set()? {
                        for r in q.expect_set()? {
                            e.push(band.mul(s, r)?);
                        }
                    }
                    let e = Value::set(e);
                    let s = lifted_pair_product(&lifted, &back, |ka, kb| evaluate_word(&[ka.clone(), kb.clone()]), p, q)?;
                    if s != e {
                        op.set_fail(Witness::paths("lifted A·B ≠ {a·b}", Value::pair(p.clone(), q.clone()), s, e));
                        break;
                    }
                }
                if op.is_fail() {
                    break;
                }
            }
            let mut g = LawReport::group(format!("band {}", x.name()), "", vec![car, op]).with_fact("size", x.len());
            if !truncated {
                g.note(format!("{} elements exceed degree {degree}; lifted through the untruncated law", x.len()));
            }
            groups.push(g);
        }
        Ok(LawReport::group(name, anchor, groups))
    })();
    LawReport::or_budget(name, anchor, res)
}

/// The `T`-algebra a lattice carries for the shipped `T`: binary meets
/// for `P_f`, and for `β` the convergence of the discrete topology.
pub fn lattice_t_algebra(t: &MonadRef, l: &FinLattice) -> Result<AlgebraSpec> {
    let x = l.carrier();
    match t.name().as_str() {
        "finite-powerset" | "powerset" => {
            let tx = t.obj(x)?;
            let act = FinFn::new(&tx, x, |v| {
                let mut acc = l.top();
                for e in v.expect_set()? {
                    acc = l.meet(acc, l.index(e)?);
                }
                Ok(l.element(acc).clone())
            })?;
            AlgebraSpec::from_fn(t, &act)
        }
        "ultrafilter" => crate::showcase::discrete_beta_structure(&crate::showcase::FinTopSpace::discrete(x)),
        other => Err(Error::InvalidStructure(format!("no lattice-derived algebra for {other}"))),
    }
}

/// `(X, t, sup)` for a lattice `X` under a law with `S = P`.
pub fn lattice_delta_algebra(d: &DistLaw, l: &FinLattice) -> Result<DeltaAlgebra> {
    let x = l.carrier();
    let t = lattice_t_algebra(d.t(), l)?;
    let sx = d.s().obj(x)?;
    let s = FinFn::new(&sx, x, |v| {
        let mut acc = l.bottom();
        for e in v.expect_set()? {
            acc = l.join(acc, l.index(e)?);
        }
        Ok(l.element(acc).clone())
    })?;
    DeltaAlgebra::new(&t.action.tabulate(&d.t().obj(x)?)?, &s)
}
