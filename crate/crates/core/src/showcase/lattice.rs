use crate::error::{Error, Result};
use crate::finrel::{FinRel, FinSet, Value};

/// A finite lattice, given by its order. Joins and meets are derived and
/// checked to exist on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLattice {
    carrier: FinSet,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

impl FinLattice {
    pub fn new(carrier: &FinSet, leq: Vec<Vec<bool>>) -> Result<FinLattice> {
        let n = carrier.len();
        if n == 0 {
            return Err(Error::InvalidStructure("a lattice has a top and a bottom".into()));
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidStructure("order table does not match the carrier".into()));
        }
        let e = |i: usize| carrier.elements()[i].to_string();
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::InvalidStructure(format!("≤ is not reflexive at {}", e(i))));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidStructure(format!("≤ is not antisymmetric at {}, {}", e(i), e(j))));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::InvalidStructure(format!("≤ is not transitive at {}, {}, {}", e(i), e(j), e(k))));
                    }
                }
            }
        }
        let bound = |i: usize, j: usize, lower: bool| -> Option<usize> {
            let below = |a: usize, b: usize| if lower { leq[a][b] } else { leq[b][a] };
            let cands: Vec<usize> = (0..n).filter(|&c| below(c, i) && below(c, j)).collect();
            cands.iter().copied().find(|&c| cands.iter().all(|&d| below(d, c)))
        };
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                meet[i][j] = bound(i, j, true)
                    .ok_or_else(|| Error::InvalidStructure(format!("no meet of {} and {}", e(i), e(j))))?;
                join[i][j] = bound(i, j, false)
                    .ok_or_else(|| Error::InvalidStructure(format!("no join of {} and {}", e(i), e(j))))?;
            }
        }
        Ok(FinLattice {
            carrier: carrier.clone(),
            leq,
            meet,
            join,
        })
    }

    /// A lattice on `carrier` ordered by a predicate on elements.
    pub fn from_order(carrier: &FinSet, leq: impl Fn(&Value, &Value) -> bool) -> Result<FinLattice> {
        let xs = carrier.elements();
        FinLattice::new(carrier, xs.iter().map(|a| xs.iter().map(|b| leq(a, b)).collect()).collect())
    }

    pub fn chain(n: usize) -> FinLattice {
        FinLattice::from_order(&FinSet::standard(n), |a, b| a <= b).expect("chains are lattices")
    }

    /// `(PX, ⊆)`.
    pub fn powerset(x: &FinSet) -> Result<FinLattice> {
        let px = FinSet::new(format!("P({})", x.name()), x.subsets_by_mask(&crate::Budget::default())?);
        FinLattice::from_order(&px, |a, b| a.is_subset(b))
    }

    /// `(PX, ⊇)`, the order used for hyperspaces.
    pub fn reverse_powerset(x: &FinSet) -> Result<FinLattice> {
        let px = FinSet::new(format!("P({})", x.name()), x.subsets_by_mask(&crate::Budget::default())?);
        FinLattice::from_order(&px, |a, b| b.is_subset(a))
    }

    /// The five-element lattice with three atoms.
    pub fn m3() -> FinLattice {
        let x = FinSet::atoms("M3", &["0", "a", "b", "c", "1"]);
        FinLattice::from_order(&x, |p, q| p == q || p.as_atom() == Some("0") || q.as_atom() == Some("1"))
            .expect("M3 is a lattice")
    }

    /// The pentagon `0 < a < b < 1`, `0 < c < 1`.
    pub fn n5() -> FinLattice {
        let x = FinSet::atoms("N5", &["0", "a", "b", "c", "1"]);
        FinLattice::from_order(&x, |p, q| {
            let (p, q) = (p.as_atom().unwrap_or(""), q.as_atom().unwrap_or(""));
            p == q || p == "0" || q == "1" || (p == "a" && q == "b")
        })
        .expect("N5 is a lattice")
    }

    /// The four-element Boolean lattice `{0, a, b, 1}`.
    pub fn diamond() -> FinLattice {
        let x = FinSet::atoms("diamond", &["0", "a", "b", "1"]);
        FinLattice::from_order(&x, |p, q| p == q || p.as_atom() == Some("0") || q.as_atom() == Some("1"))
            .expect("the diamond is a lattice")
    }

    /// All lattices with `n` elements up to isomorphism, on the carrier
    /// `{0, …, n-1}` with `0` the bottom and `n-1` the top.
    pub fn all(n: usize) -> Vec<FinLattice> {
        if n == 0 {
            return vec![];
        }
        let x = FinSet::standard(n);
        let idx: Vec<usize> = x.iter().map(|v| v.as_atom().and_then(|s| s.parse().ok()).unwrap_or(0)).collect();
        // every finite order has a linear extension, so it suffices to
        // consider orders contained in the numeric one
        let pairs: Vec<(usize, usize)> = (1..n.saturating_sub(1))
            .flat_map(|i| (i + 1..n - 1).map(move |j| (i, j)))
            .collect();
        let mut seen: Vec<Vec<Vec<bool>>> = Vec::new();
        let mut out = Vec::new();
        for pick in 0..(1u64 << pairs.len()) {
            let mut num = vec![vec![false; n]; n];
            for i in 0..n {
                num[i][i] = true;
                num[0][i] = true;
                num[i][n - 1] = true;
            }
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if pick >> b & 1 == 1 {
                    num[i][j] = true;
                }
            }
            let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| num[idx[a]][idx[b]]).collect()).collect();
            let Ok(l) = FinLattice::new(&x, leq) else { continue };
            let canon = canonical(&num);
            if !seen.contains(&canon) {
                seen.push(canon);
                out.push(l);
            }
        }
        out
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn element(&self, i: usize) -> &Value {
        &self.carrier.elements()[i]
    }

    pub fn index(&self, v: &Value) -> Result<usize> {
        self.carrier.index_or_err(v)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i][j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i][j]
    }

    pub fn bottom(&self) -> usize {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq[i][j])).expect("lattice bottom")
    }

    pub fn top(&self) -> usize {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq[j][i])).expect("lattice top")
    }

    /// `inf` of the elements in `mask`; the top for the empty set.
    pub fn inf(&self, mask: u64) -> usize {
        (0..self.len()).filter(|i| mask >> i & 1 == 1).fold(self.top(), |a, i| self.meet(a, i))
    }

    /// `sup` of the elements in `mask`; the bottom for the empty set.
    pub fn sup(&self, mask: u64) -> usize {
        (0..self.len()).filter(|i| mask >> i & 1 == 1).fold(self.bottom(), |a, i| self.join(a, i))
    }

    pub fn up(&self, i: usize) -> u64 {
        (0..self.len()).filter(|&j| self.leq[i][j]).fold(0, |m, j| m | 1 << j)
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))))
        })
    }

    /// The order as a relation on the carrier.
    pub fn order_rel(&self) -> FinRel {
        let pairs = self.pairs(|i, j| self.leq[i][j]);
        FinRel::new(&self.carrier, &self.carrier, pairs).expect("pairs lie in the carrier")
    }

    fn pairs(&self, p: impl Fn(usize, usize) -> bool) -> Vec<(Value, Value)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p(i, j))
            .map(|(i, j)| (self.element(i).clone(), self.element(j).clone()))
            .collect()
    }

    /// Whether the elements in `mask` form a directed set: nonempty, and
    /// every pair has an upper bound inside.
    pub fn is_directed(&self, mask: u64) -> bool {
        let ms: Vec<usize> = (0..self.len()).filter(|i| mask >> i & 1 == 1).collect();
        !ms.is_empty() && ms.iter().all(|&a| ms.iter().all(|&b| ms.iter().any(|&c| self.leq[a][c] && self.leq[b][c])))
    }
}

fn canonical(leq: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = leq.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<Vec<bool>>> = None;
    permute(&mut perm, 0, &mut |p| {
        let m: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| leq[p[a]][p[b]]).collect()).collect();
        if best.as_ref().is_none_or(|b| m < *b) {
            best = Some(m);
        }
    });
    best.unwrap_or_default()
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// `x ≪ y`, evaluated from its definition: for every directed `D` with
/// `y ≤ sup D`, some `d ∈ D` has `x ≤ d`.
pub fn way_below(l: &FinLattice) -> FinRel {
    let n = l.len();
    let directed: Vec<u64> = (1..1u64 << n).filter(|&m| l.is_directed(m)).collect();
    let pairs = l.pairs(|x, y| {
        directed
            .iter()
            .filter(|&&d| l.leq(y, l.sup(d)))
            .all(|&d| (0..n).any(|i| d >> i & 1 == 1 && l.leq(x, i)))
    });
    FinRel::new(l.carrier(), l.carrier(), pairs).expect("pairs lie in the carrier")
}

/// On a finite lattice every directed set has a largest element, so `≪`
/// is `≤`.
pub fn way_below_shortcut(l: &FinLattice) -> FinRel {
    l.order_rel()
}
