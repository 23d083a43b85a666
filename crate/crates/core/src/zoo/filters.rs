//! Filters and ultrafilters on finite sets, found by search over families
//! of subsets rather than built as principal by fiat.

use std::sync::Arc;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Budget, Error, Result};
use crate::finrel::{Arrow, FinSet, Value};
use crate::monadkit::{Functor, Memo, Monad};

/// Largest carrier whose subsets are tracked as bit masks.
pub const MAX_BASE: usize = 24;

const UNKNOWN: i8 = 0;
const IN: i8 = 1;
const OUT: i8 = -1;

struct Search {
    n: usize,
    full: u32,
    ultra: bool,
    state: Vec<i8>,
    trail: Vec<u32>,
    queue: Vec<(u32, i8)>,
}

impl Search {
    /// Assigns `m` and propagates: members are up-closed, non-members
    /// down-closed, and for ultrafilters exactly one of `A`, `X∖A` is in.
    fn assign(&mut self, m: u32, val: i8) -> bool {
        self.queue.clear();
        self.queue.push((m, val));
        while let Some((a, v)) = self.queue.pop() {
            let s = self.state[a as usize];
            if s == v {
                continue;
            }
            if s == -v {
                return false;
            }
            self.state[a as usize] = v;
            self.trail.push(a);
            for i in 0..self.n {
                let bit = 1u32 << i;
                if v == IN && a & bit == 0 {
                    self.queue.push((a | bit, IN));
                }
                if v == OUT && a & bit != 0 {
                    self.queue.push((a & !bit, OUT));
                }
            }
            if self.ultra {
                self.queue.push((self.full ^ a, -v));
            }
        }
        true
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let a = self.trail.pop().expect("trail");
            self.state[a as usize] = UNKNOWN;
        }
    }
}

struct Frame {
    pos: usize,
    trail_len: usize,
    alt: i8,
}

/// All filters (or ultrafilters) on an `n`-element set, each as the sorted
/// list of member masks.
///
/// Subsets are decided in decreasing size. A subset may join only if all
/// its one-point extensions are members, and must join when the members
/// above it intersect to exactly it.
pub fn filter_families(n: usize, ultra: bool) -> Vec<Vec<u32>> {
    assert!(n <= MAX_BASE, "filter search supports at most {MAX_BASE} points");
    let size = 1usize << n;
    let full = (size - 1) as u32;
    let mut order: Vec<u32> = (0..size as u32).collect();
    order.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    let mut s = Search {
        n,
        full,
        ultra,
        state: vec![UNKNOWN; size],
        trail: Vec::new(),
        queue: Vec::new(),
    };
    // meet of the members containing each decided set
    let mut meet = vec![0u32; size];
    let mut stack: Vec<Frame> = Vec::new();
    let mut out = Vec::new();
    let mut pos = 0usize;
    let mut pending: Option<i8> = None;
    loop {
        let mut conflict = false;
        if pos == size {
            let mut fam: Vec<u32> = (0..size as u32).filter(|&m| s.state[m as usize] == IN).collect();
            fam.sort_unstable();
            out.push(fam);
            conflict = true;
        } else {
            let m = order[pos];
            let mut k = full;
            let mut allowed = true;
            for i in 0..n {
                let bit = 1u32 << i;
                if m & bit == 0 {
                    k &= meet[(m | bit) as usize];
                    allowed &= s.state[(m | bit) as usize] == IN;
                }
            }
            let forced = k == m;
            let choice = match pending.take() {
                Some(c) => Some(c),
                None => match s.state[m as usize] {
                    IN => Some(IN),
                    OUT if forced => None,
                    OUT => Some(OUT),
                    _ => {
                        if forced {
                            if allowed {
                                Some(IN)
                            } else {
                                None
                            }
                        } else if allowed {
                            stack.push(Frame {
                                pos,
                                trail_len: s.trail.len(),
                                alt: OUT,
                            });
                            Some(IN)
                        } else {
                            Some(OUT)
                        }
                    }
                },
            };
            match choice {
                Some(c) if s.assign(m, c) => {
                    meet[m as usize] = if c == IN { m } else { k };
                    pos += 1;
                }
                _ => conflict = true,
            }
        }
        if conflict {
            match stack.pop() {
                None => break,
                Some(f) => {
                    s.undo(f.trail_len);
                    pos = f.pos;
                    pending = Some(f.alt);
                }
            }
        }
    }
    out
}

/// Direct check of the filter biconditional (and the ultrafilter condition).
pub fn is_filter_family(n: usize, members: &[u32], ultra: bool) -> bool {
    let size = 1usize << n;
    let full = (size - 1) as u32;
    let mut inf = vec![false; size];
    for &m in members {
        inf[m as usize] = true;
    }
    if !inf[full as usize] {
        return false;
    }
    for a in 0..size {
        for b in 0..size {
            if (inf[a] && inf[b]) != inf[a & b] {
                return false;
            }
        }
    }
    if ultra {
        for a in 0..size {
            if inf[a] == inf[full as usize ^ a] {
                return false;
            }
        }
    }
    true
}

struct Tables {
    subsets: Arc<Vec<Value>>,
    units: Arc<Vec<Value>>,
}

/// The ultrafilter monad on finite sets (`ultra = true`) or the filter monad.
///
/// Elements are families of subsets. Units are principal, arrows act by
/// pushforward, and `μ(𝔉) = {A : A^# ∈ 𝔉}` with `A^# = {F : A ∈ F}`.
pub struct FilterMonad {
    ultra: bool,
    budget: Budget,
    cache: Memo<FinSet>,
    tables: Memo<Arc<Tables>>,
    sharps: Memo<Arc<Vec<Value>>>,
}

impl FilterMonad {
    pub fn new(ultra: bool, budget: Budget) -> FilterMonad {
        FilterMonad {
            ultra,
            budget,
            cache: Memo::default(),
            tables: Memo::default(),
            sharps: Memo::default(),
        }
    }

    fn symbol(&self) -> &'static str {
        if self.ultra {
            "β"
        } else {
            "F"
        }
    }

    fn base_check(&self, x: &FinSet) -> Result<()> {
        if x.len() > MAX_BASE {
            return Err(Error::budget(
                format!("subsets of {}", x.name()),
                1u128 << x.len().min(127),
                self.budget.max_elements,
            ));
        }
        x.check_powerset_budget(&self.budget)
    }

    fn tables(&self, x: &FinSet) -> Result<Arc<Tables>> {
        self.tables.get_or_try(x, || {
            self.base_check(x)?;
            let subsets = x.subsets_by_mask(&self.budget)?;
            let units = (0..x.len())
                .map(|i| {
                    Value::set(
                        (0..subsets.len())
                            .filter(|m| m >> i & 1 == 1)
                            .map(|m| subsets[m].clone()),
                    )
                })
                .collect();
            Ok(Arc::new(Tables {
                subsets: Arc::new(subsets),
                units: Arc::new(units),
            }))
        })
    }

    /// `A^#` for every `A ⊆ X`, indexed by mask.
    fn sharps(&self, x: &FinSet) -> Result<Arc<Vec<Value>>> {
        self.sharps.get_or_try(x, || {
            let tx = self.obj(x)?;
            let t = self.tables(x)?;
            Ok(Arc::new(
                t.subsets
                    .iter()
                    .map(|a| Value::set_sorted(tx.iter().filter(|f| f.contains(a)).cloned().collect()))
                    .collect(),
            ))
        })
    }

    /// The principal filter `{A : S ⊆ A}`.
    pub fn principal(&self, x: &FinSet, s: &Value) -> Result<Value> {
        let mask = x.mask_of(s)?;
        let t = self.tables(x)?;
        Ok(Value::set(
            (0..t.subsets.len() as u64)
                .filter(|m| m & mask == mask)
                .map(|m| t.subsets[m as usize].clone()),
        ))
    }

    /// `⋂F`, the generating set of a filter on a finite carrier.
    pub fn generator(&self, x: &FinSet, f: &Value) -> Result<Value> {
        let mut mask = x.full_mask();
        for a in f.expect_set()? {
            mask &= x.mask_of(a)?;
        }
        Ok(x.subset_value(mask))
    }
}

impl Functor for FilterMonad {
    fn name(&self) -> String {
        if self.ultra { "ultrafilter" } else { "filter" }.to_string()
    }

    fn size_hint(&self, n: usize) -> Option<u128> {
        if self.ultra {
            Some(n as u128)
        } else if n >= 127 {
            Some(u128::MAX)
        } else {
            Some(1u128 << n)
        }
    }

    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        self.cache.get_or_try(x, || {
            let n = x.len();
            let name = format!("{}({})", self.symbol(), x.name());
            self.base_check(x)?;
            let count = self.size_hint(n).unwrap_or(u128::MAX);
            self.budget.check(|| name.clone(), count)?;
            let half = if n == 0 { 1 } else { 1u128 << (n - 1) };
            self.budget
                .check(|| format!("members of {name}"), count.saturating_mul(half) / 32)?;
            let t = self.tables(x)?;
            let fams = filter_families(n, self.ultra);
            if n <= 6 {
                for fam in &fams {
                    if !is_filter_family(n, fam, self.ultra) {
                        return Err(Error::InvalidStructure(format!("search produced a non-filter on {}", x.name())));
                    }
                }
            }
            let elems: Vec<Value> = fams
                .iter()
                .map(|fam| Value::set(fam.iter().map(|&m| t.subsets[m as usize].clone())))
                .collect();
            if self.ultra {
                // on a finite set every ultrafilter must turn out principal
                if elems.len() != n || elems.iter().any(|u| !t.units.contains(u)) {
                    return Err(Error::InvalidStructure(format!(
                        "found {} ultrafilters on {}, expected {n} principal ones",
                        elems.len(),
                        x.name()
                    )));
                }
            }
            Ok(FinSet::new(name, elems))
        })
    }

    /// Pushforward `f_!(F)`, computed as the up-closure of `{f(A) : A ∈ F}`.
    fn fmap(&self, f: &Arrow, t: &Value) -> Result<Value> {
        if f.is_opaque() {
            return Err(Error::mismatch("filter pushforward needs a listed codomain"));
        }
        let y = f.cod();
        self.base_check(y)?;
        let tables = self.tables(y)?;
        let size = 1usize << y.len();
        let mut marked = vec![false; size];
        for a in t.expect_set()? {
            let mut mask = 0u64;
            for v in a.expect_set()? {
                mask |= 1u64 << y.index_or_err(&f.apply(v)?)?;
            }
            marked[mask as usize] = true;
        }
        for i in 0..y.len() {
            let bit = 1usize << i;
            for m in 0..size {
                if m & bit == 0 && marked[m] {
                    marked[m | bit] = true;
                }
            }
        }
        Ok(Value::set(
            (0..size).filter(|&m| marked[m]).map(|m| tables.subsets[m].clone()),
        ))
    }

    fn sample(&self, x: &FinSet, rng: &mut ChaCha8Rng) -> Result<Value> {
        let n = x.len();
        if self.ultra {
            if n == 0 {
                return Err(Error::InvalidStructure("β(∅) is empty".into()));
            }
            return self.unit(x, &x.elements()[rng.gen_range(0..n)]);
        }
        // principal filters ↑S with a small complement, so the member list stays short
        let k = rng.gen_range(0..=n.min(6));
        let comp: Vec<usize> = sample_indices(rng, n, k).into_vec();
        let base: Vec<Value> = (0..n)
            .filter(|i| !comp.contains(i))
            .map(|i| x.elements()[i].clone())
            .collect();
        let mut members = Vec::with_capacity(1 << k);
        for m in 0u32..(1 << k) {
            let mut s = base.clone();
            for (j, &i) in comp.iter().enumerate() {
                if m >> j & 1 == 1 {
                    s.push(x.elements()[i].clone());
                }
            }
            members.push(Value::set(s));
        }
        Ok(Value::set(members))
    }

    fn budget(&self) -> Budget {
        self.budget
    }
}

impl Monad for FilterMonad {
    fn unit(&self, x: &FinSet, v: &Value) -> Result<Value> {
        let i = x.index_or_err(v)?;
        Ok(self.tables(x)?.units[i].clone())
    }

    fn mult(&self, x: &FinSet, t: &Value) -> Result<Value> {
        let tables = self.tables(x)?;
        let sharps = self.sharps(x)?;
        let fam = t.expect_set()?;
        let mut members = Vec::new();
        for (m, a) in tables.subsets.iter().enumerate() {
            if fam.binary_search(&sharps[m]).is_ok() {
                members.push(a.clone());
            }
        }
        Ok(Value::set(members))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every family of subsets, tested against the definition directly.
    fn brute_force(n: usize, ultra: bool) -> Vec<Vec<u32>> {
        let size = 1usize << n;
        let mut out = Vec::new();
        for fam in 0u64..(1u64 << size) {
            let members: Vec<u32> = (0..size as u32).filter(|m| fam >> m & 1 == 1).collect();
            if is_filter_family(n, &members, ultra) {
                out.push(members);
            }
        }
        out
    }

    #[test]
    fn search_matches_brute_force() {
        for n in 0..=4 {
            for ultra in [false, true] {
                let mut a = filter_families(n, ultra);
                a.sort();
                let mut b = brute_force(n, ultra);
                b.sort();
                assert_eq!(a, b, "n = {n}, ultra = {ultra}");
            }
        }
    }

    #[test]
    fn counts() {
        for n in 0..=8 {
            assert_eq!(filter_families(n, false).len(), 1 << n);
            assert_eq!(filter_families(n, true).len(), n);
        }
        assert_eq!(filter_families(16, true).len(), 16);
    }
}
