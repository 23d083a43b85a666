use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::finrel::{FinSet, Value};

/// A topology on a finite carrier, stored as its family of open sets.
/// Subsets are bitmasks over the carrier's element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinTopSpace {
    carrier: FinSet,
    opens: BTreeSet<u64>,
}

impl FinTopSpace {
    pub fn new(carrier: &FinSet, opens: impl IntoIterator<Item = u64>) -> Result<FinTopSpace> {
        if carrier.len() > 16 {
            return Err(Error::InvalidStructure(format!("{} is too large for a listed topology", carrier.name())));
        }
        let full = carrier.full_mask();
        let opens: BTreeSet<u64> = opens.into_iter().collect();
        if let Some(bad) = opens.iter().find(|&&u| u & !full != 0) {
            return Err(Error::InvalidStructure(format!("open set {bad:#b} leaves {}", carrier.name())));
        }
        if !opens.contains(&0) || !opens.contains(&full) {
            return Err(Error::InvalidStructure("a topology contains ∅ and the carrier".into()));
        }
        for &u in &opens {
            for &v in &opens {
                if !opens.contains(&(u | v)) || !opens.contains(&(u & v)) {
                    return Err(Error::InvalidStructure(format!(
                        "open sets {} and {} are not closed under ∪ and ∩",
                        carrier.subset_value(u),
                        carrier.subset_value(v)
                    )));
                }
            }
        }
        Ok(FinTopSpace {
            carrier: carrier.clone(),
            opens,
        })
    }

    pub fn discrete(carrier: &FinSet) -> FinTopSpace {
        FinTopSpace {
            carrier: carrier.clone(),
            opens: (0..=carrier.full_mask()).collect(),
        }
    }

    pub fn indiscrete(carrier: &FinSet) -> FinTopSpace {
        FinTopSpace {
            carrier: carrier.clone(),
            opens: [0, carrier.full_mask()].into_iter().collect(),
        }
    }

    /// The topology generated by a subbasis: finite intersections, then
    /// unions, saturated to a fixpoint.
    pub fn generated(carrier: &FinSet, subbasis: impl IntoIterator<Item = u64>) -> FinTopSpace {
        let full = carrier.full_mask();
        let mut basis: BTreeSet<u64> = [full].into_iter().collect();
        for s in subbasis {
            let meets: Vec<u64> = basis.iter().map(|b| b & s).collect();
            basis.extend(meets);
            basis.insert(s & full);
        }
        let mut opens: BTreeSet<u64> = [0].into_iter().collect();
        for b in &basis {
            let joins: Vec<u64> = opens.iter().map(|u| u | b).collect();
            opens.extend(joins);
        }
        FinTopSpace {
            carrier: carrier.clone(),
            opens,
        }
    }

    /// Every topology on a carrier of at most four points.
    pub fn all(carrier: &FinSet) -> Result<Vec<FinTopSpace>> {
        if carrier.len() > 4 {
            return Err(Error::budget(format!("topologies on {}", carrier.name()), 1 << 14, 1 << 14));
        }
        let full = carrier.full_mask();
        let middle: Vec<u64> = (1..full).collect();
        let mut out = Vec::new();
        for pick in 0..(1u64 << middle.len()) {
            let opens = [0, full]
                .into_iter()
                .chain(middle.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &m)| m));
            if let Ok(t) = FinTopSpace::new(carrier, opens) {
                out.push(t);
            }
        }
        Ok(out)
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn opens(&self) -> impl Iterator<Item = u64> + '_ {
        self.opens.iter().copied()
    }

    pub fn is_open(&self, mask: u64) -> bool {
        self.opens.contains(&mask)
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() as u64 == 1 << self.carrier.len()
    }

    /// Distinct points have disjoint open neighbourhoods.
    pub fn is_hausdorff(&self) -> bool {
        let n = self.carrier.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                self.opens
                    .iter()
                    .filter(|&&u| u >> i & 1 == 1)
                    .any(|&u| self.opens.iter().any(|&v| v >> j & 1 == 1 && u & v == 0))
            })
        })
    }

    /// The smallest closed set containing `mask`.
    pub fn closure(&self, mask: u64) -> u64 {
        let full = self.carrier.full_mask();
        self.opens
            .iter()
            .map(|u| full & !u)
            .filter(|c| c & mask == mask)
            .fold(full, |acc, c| acc & c)
    }

    pub fn closure_of(&self, set: &Value) -> Result<Value> {
        Ok(self.carrier.subset_value(self.closure(self.carrier.mask_of(set)?)))
    }

    pub fn closed_sets(&self) -> Vec<u64> {
        let full = self.carrier.full_mask();
        self.opens.iter().rev().map(|u| full & !u).collect()
    }

    /// Whether a filter, given by its member masks, converges to point `i`:
    /// every open neighbourhood of the point is a member.
    pub fn converges(&self, filter: &[u32], i: usize) -> bool {
        self.opens
            .iter()
            .filter(|&&u| u >> i & 1 == 1)
            .all(|&u| filter.contains(&(u as u32)))
    }

    pub fn opens_value(&self) -> Value {
        Value::set(self.opens.iter().map(|&u| self.carrier.subset_value(u)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_in_the_sierpinski_space() {
        let x = FinSet::standard(2);
        let s = FinTopSpace::new(&x, [0, 0b01, 0b11]).unwrap();
        assert_eq!(s.closure(0b10), 0b10);
        assert_eq!(s.closure(0b01), 0b11);
        assert!(!s.is_discrete());
    }

    #[test]
    fn topologies_on_small_carriers() {
        let counts: Vec<usize> = (0..=3).map(|n| FinTopSpace::all(&FinSet::standard(n)).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29]);
    }

    #[test]
    fn singletons_generate_the_discrete_topology() {
        let x = FinSet::standard(3);
        assert!(FinTopSpace::generated(&x, [1, 2, 4]).is_discrete());
    }
}
