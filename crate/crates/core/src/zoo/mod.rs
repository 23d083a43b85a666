//! The concrete monads: power sets, filters, ultrafilters, bounded
//! multisets and free normal bands.

mod filters;
mod multiset;
mod normalband;
mod powerset;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::monadkit::MonadRef;

pub use filters::{filter_families, is_filter_family, FilterMonad, MAX_BASE};
pub use multiset::Multiset;
pub use normalband::{band_product, evaluate_word, NormalBand};
pub use powerset::{Identity, Powerset, PowersetKind};

pub const DEFAULT_DEGREE: usize = 3;

pub fn powerset_monad() -> MonadRef {
    Arc::new(Powerset::new(PowersetKind::Full, Budget::default()))
}

pub fn nonempty_powerset_monad() -> MonadRef {
    Arc::new(Powerset::new(PowersetKind::Nonempty, Budget::default()))
}

pub fn finite_powerset_monad() -> MonadRef {
    Arc::new(Powerset::new(PowersetKind::Finite, Budget::default()))
}

pub fn ultrafilter_monad_fin() -> MonadRef {
    Arc::new(FilterMonad::new(true, Budget::default()))
}

pub fn filter_monad_fin() -> MonadRef {
    Arc::new(FilterMonad::new(false, Budget::default()))
}

pub fn multiset_monad(d: usize) -> MonadRef {
    Arc::new(Multiset::new(d, Budget::default()))
}

pub fn normal_band_monad(d: usize) -> MonadRef {
    Arc::new(NormalBand::new(Some(d), Budget::default()))
}

/// A monad name as used on the command line and in JSON, e.g. `multiset(2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadName {
    pub monad: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

impl MonadName {
    pub fn parse(s: &str) -> Result<MonadName> {
        let s = s.trim();
        if let Some(open) = s.find('(') {
            let inner = s[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
            let d = inner
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad degree in {s:?}")))?;
            Ok(MonadName {
                monad: s[..open].trim().to_string(),
                degree: Some(d),
            })
        } else {
            Ok(MonadName {
                monad: s.to_string(),
                degree: None,
            })
        }
    }
}

pub const MONAD_NAMES: &[&str] = &[
    "powerset",
    "nonempty-powerset",
    "finite-powerset",
    "ultrafilter",
    "filter",
    "multiset",
    "normal-band",
    "identity",
];

/// Builds a monad from its name. Degree-bounded monads default to
/// [`DEFAULT_DEGREE`]; `normal-band(0)` is rejected, and `normal-band(inf)`
/// is not a name (use [`NormalBand::new`] with `None`).
pub fn by_name(name: &str, budget: Budget) -> Result<MonadRef> {
    let n = MonadName::parse(name)?;
    let plain = |m: MonadRef| -> Result<MonadRef> {
        match n.degree {
            None => Ok(m),
            Some(_) => Err(Error::Parse(format!("{} takes no degree", n.monad))),
        }
    };
    let degree = || -> Result<usize> {
        let d = n.degree.unwrap_or(DEFAULT_DEGREE);
        if d == 0 {
            return Err(Error::Parse(format!("{} needs a degree of at least 1", n.monad)));
        }
        Ok(d)
    };
    match n.monad.as_str() {
        "powerset" | "P" => plain(Arc::new(Powerset::new(PowersetKind::Full, budget))),
        "nonempty-powerset" | "P+" => plain(Arc::new(Powerset::new(PowersetKind::Nonempty, budget))),
        "finite-powerset" | "Pf" => plain(Arc::new(Powerset::new(PowersetKind::Finite, budget))),
        "ultrafilter" | "beta" => plain(Arc::new(FilterMonad::new(true, budget))),
        "filter" => plain(Arc::new(FilterMonad::new(false, budget))),
        "identity" => plain(Arc::new(Identity::new(budget))),
        "multiset" => Ok(Arc::new(Multiset::new(degree()?, budget))),
        "normal-band" => Ok(Arc::new(NormalBand::new(Some(degree()?), budget))),
        other => Err(Error::Unknown(format!("monad {other:?}"))),
    }
}
