use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finrel::{FinSet, Value};

/// A total function between finite carriers, stored as an image table
/// aligned with the domain's element order.
#[derive(Clone, PartialEq, Eq)]
pub struct FinFn {
    dom: FinSet,
    cod: FinSet,
    images: Arc<[Value]>,
}

impl FinFn {
    /// Tabulates `f` over `dom`, checking every image lies in `cod`.
    pub fn new(dom: &FinSet, cod: &FinSet, f: impl Fn(&Value) -> Result<Value>) -> Result<FinFn> {
        let images = dom.iter().map(&f).collect::<Result<Vec<_>>>()?;
        FinFn::from_images(dom, cod, images)
    }

    pub fn from_images(dom: &FinSet, cod: &FinSet, images: Vec<Value>) -> Result<FinFn> {
        if images.len() != dom.len() {
            return Err(Error::InvalidStructure(format!(
                "function table has {} entries for a domain of {}",
                images.len(),
                dom.len()
            )));
        }
        for v in &images {
            cod.index_or_err(v)?;
        }
        Ok(FinFn {
            dom: dom.clone(),
            cod: cod.clone(),
            images: images.into(),
        })
    }

    /// Builds a function from an explicit association list.
    pub fn from_pairs(dom: &FinSet, cod: &FinSet, pairs: &[(Value, Value)]) -> Result<FinFn> {
        let mut map: BTreeMap<&Value, &Value> = BTreeMap::new();
        for (a, b) in pairs {
            dom.index_or_err(a)?;
            if let Some(prev) = map.insert(a, b) {
                if prev != b {
                    return Err(Error::InvalidStructure(format!("{a} has two images {prev} and {b}")));
                }
            }
        }
        let images = dom
            .iter()
            .map(|a| {
                map.get(a)
                    .map(|b| (*b).clone())
                    .ok_or_else(|| Error::InvalidStructure(format!("{a} has no image")))
            })
            .collect::<Result<Vec<_>>>()?;
        FinFn::from_images(dom, cod, images)
    }

    pub fn identity(x: &FinSet) -> FinFn {
        FinFn {
            dom: x.clone(),
            cod: x.clone(),
            images: x.elements().to_vec().into(),
        }
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, v: &Value) -> Result<FinFn> {
        FinFn::new(dom, cod, |_| Ok(v.clone()))
    }

    /// Every function `dom -> cod`, in lexicographic order of image tables.
    pub fn all(dom: &FinSet, cod: &FinSet, budget: &crate::Budget) -> Result<Vec<FinFn>> {
        let count = (cod.len() as u128).checked_pow(dom.len() as u32).unwrap_or(u128::MAX);
        budget.check(|| format!("functions {} -> {}", dom.name(), cod.name()), count)?;
        let mut out = Vec::with_capacity(count as usize);
        let n = dom.len();
        let mut idx = vec![0usize; n];
        if cod.is_empty() && n > 0 {
            return Ok(out);
        }
        loop {
            let images: Vec<Value> = idx.iter().map(|&i| cod.elements()[i].clone()).collect();
            out.push(FinFn {
                dom: dom.clone(),
                cod: cod.clone(),
                images: images.into(),
            });
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < cod.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn images(&self) -> &[Value] {
        &self.images
    }

    pub fn apply(&self, v: &Value) -> Result<Value> {
        Ok(self.images[self.dom.index_or_err(v)?].clone())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Value, &Value)> {
        self.dom.iter().zip(self.images.iter())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FinFn) -> Result<FinFn> {
        self.cod.require_same(&g.dom, "composition")?;
        let images = self.images.iter().map(|v| g.apply(v)).collect::<Result<Vec<_>>>()?;
        Ok(FinFn {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            images: images.into(),
        })
    }

    pub fn is_idempotent(&self) -> bool {
        self.dom == self.cod
            && self
                .images
                .iter()
                .all(|v| self.apply(v).map(|w| &w == v).unwrap_or(false))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for v in self.images.iter() {
            if let Some(i) = self.cod.index_of(v) {
                hit[i] = true;
            }
        }
        hit.into_iter().all(|b| b)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        for v in self.images.iter() {
            let i = self.cod.index_of(v).expect("image in codomain");
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.pairs().all(|(a, b)| a == b)
    }

    pub fn arrow(&self) -> Arrow {
        let f = self.clone();
        Arrow::new(&self.cod, move |v| f.apply(v))
    }

    /// Same table, reinterpreted against a codomain containing every image.
    pub fn with_cod(&self, cod: &FinSet) -> Result<FinFn> {
        FinFn::from_images(&self.dom, cod, self.images.to_vec())
    }
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {{", self.dom.name(), self.cod.name())?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}↦{b}")?;
        }
        f.write_str("}")
    }
}

type ArrowFn = dyn Fn(&Value) -> Result<Value> + Send + Sync;

/// A lazily evaluated function into a materialized codomain.
///
/// Law checks run over carriers too large to tabulate, so maps such as
/// `Tμ_X` are kept as closures and only evaluated where needed.
#[derive(Clone)]
pub struct Arrow {
    cod: FinSet,
    opaque: bool,
    f: Arc<ArrowFn>,
}

impl Arrow {
    pub fn new(cod: &FinSet, f: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static) -> Arrow {
        Arrow {
            cod: cod.clone(),
            opaque: false,
            f: Arc::new(f),
        }
    }

    /// An arrow whose codomain is too large to list. Functors that need the
    /// codomain reject it, and it cannot be tabulated.
    pub fn opaque(label: impl AsRef<str>, f: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static) -> Arrow {
        Arrow {
            cod: FinSet::new(label, []),
            opaque: true,
            f: Arc::new(f),
        }
    }

    pub fn is_opaque(&self) -> bool {
        self.opaque
    }

    pub fn identity(x: &FinSet) -> Arrow {
        Arrow::new(x, |v| Ok(v.clone()))
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn apply(&self, v: &Value) -> Result<Value> {
        (self.f)(v)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Arrow) -> Arrow {
        let f = self.f.clone();
        let g2 = g.f.clone();
        Arrow {
            cod: g.cod.clone(),
            opaque: g.opaque,
            f: Arc::new(move |v| g2(&f(v)?)),
        }
    }

    pub fn tabulate(&self, dom: &FinSet) -> Result<FinFn> {
        if self.opaque {
            return Err(Error::mismatch(format!("cannot tabulate into {}", self.cod.name())));
        }
        FinFn::new(dom, &self.cod, |v| self.apply(v))
    }

    /// Identity of the underlying closure; clones share it.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.f) as *const () as usize
    }
}

impl fmt::Debug for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Arrow(-> {})", self.cod.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Budget;

    #[test]
    fn composition_and_identity() {
        let x = FinSet::standard(3);
        let y = FinSet::atoms("Y", &["a", "b"]);
        let f = FinFn::new(&x, &y, |v| Ok(Value::atom(if v.as_atom() == Some("0") { "a" } else { "b" }))).unwrap();
        assert_eq!(FinFn::identity(&x).then(&f).unwrap(), f);
        assert_eq!(f.then(&FinFn::identity(&y)).unwrap(), f);
        assert!(f.is_surjective());
        assert!(!f.is_injective());
    }

    #[test]
    fn image_outside_codomain_is_rejected() {
        let x = FinSet::standard(1);
        let y = FinSet::atoms("Y", &["a"]);
        assert!(FinFn::new(&x, &y, |_| Ok(Value::atom("z"))).is_err());
    }

    #[test]
    fn enumerates_all_functions() {
        let x = FinSet::standard(2);
        let y = FinSet::standard(3);
        let all = FinFn::all(&x, &y, &Budget::default()).unwrap();
        assert_eq!(all.len(), 9);
        assert_eq!(FinFn::all(&FinSet::empty(), &FinSet::empty(), &Budget::default()).unwrap().len(), 1);
        assert!(FinFn::all(&x, &FinSet::empty(), &Budget::default()).unwrap().is_empty());
    }
}
