use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Budget, Error, Result};
use crate::finrel::{FinSet, Value};
use crate::monadkit::{fits, FunctorRef};
use crate::report::{LawReport, Status, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub budget: Budget,
    /// Sample count used when a domain is too large to list.
    pub samples: usize,
    pub seed: u64,
}

impl CheckConfig {
    pub const DEFAULT_SEED: u64 = 0x5eed;
    pub const DEFAULT_SAMPLES: usize = 256;

    pub fn with_budget(budget: Budget) -> CheckConfig {
        CheckConfig {
            budget,
            ..CheckConfig::default()
        }
    }

    pub fn seeded(mut self, seed: u64) -> CheckConfig {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> CheckConfig {
        self.samples = samples;
        self
    }
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            budget: Budget::default(),
            samples: Self::DEFAULT_SAMPLES,
            seed: Self::DEFAULT_SEED,
        }
    }
}

pub type Sampler = Arc<dyn Fn(&mut ChaCha8Rng) -> Result<Value> + Send + Sync>;

/// The source elements of a diagram: listed in full, or drawn by a sampler.
#[derive(Clone)]
pub enum Domain {
    Exhaustive(FinSet),
    Sampled { label: String, sampler: Sampler },
}

impl Domain {
    /// `F(inner)`, listed when it fits the budget and sampled otherwise.
    pub fn over(f: &FunctorRef, inner: &FinSet, budget: &Budget) -> Result<Domain> {
        if fits(f.as_ref(), inner.len(), budget) {
            match f.obj(inner) {
                Ok(s) if (s.len() as u128) <= budget.max_elements => return Ok(Domain::Exhaustive(s)),
                Ok(_) => {}
                Err(e) if e.is_budget() => {}
                Err(e) => return Err(e),
            }
        }
        let f = f.clone();
        let inner = inner.clone();
        Ok(Domain::Sampled {
            label: format!("{}({})", f.name(), inner.name()),
            sampler: Arc::new(move |rng| f.sample(&inner, rng)),
        })
    }

    /// `FFX` sampled without listing `FX`: a few sampled elements of `FX`
    /// are collected into a set and `F` is sampled over that.
    pub fn nested(f: &FunctorRef, x: &FinSet) -> Domain {
        let f = f.clone();
        let x = x.clone();
        Domain::Sampled {
            label: format!("{0}({0}({1}))", f.name(), x.name()),
            sampler: Arc::new(move |rng| {
                let k = rng.gen_range(1..=4);
                let picks = (0..k).map(|_| f.sample(&x, rng)).collect::<Result<Vec<_>>>()?;
                f.sample(&FinSet::new("sampled", picks), rng)
            }),
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        matches!(self, Domain::Exhaustive(_))
    }

    /// The listed elements, or a seeded sample, with the number of
    /// out-of-range draws.
    pub fn elements(&self, cfg: &CheckConfig) -> Result<(Vec<Value>, u64)> {
        match self {
            Domain::Exhaustive(s) => Ok((s.elements().to_vec(), 0)),
            Domain::Sampled { sampler, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                let mut out = Vec::with_capacity(cfg.samples);
                let mut skipped = 0;
                for _ in 0..cfg.samples {
                    match sampler(&mut rng) {
                        Ok(v) => out.push(v),
                        Err(e) if e.is_out_of_range() => skipped += 1,
                        Err(e) => return Err(e),
                    }
                }
                Ok((out, skipped))
            }
        }
    }
}

enum Outcome {
    Ok,
    Skip,
    Fail(Box<Witness>),
    Err(Error),
}

/// Evaluates `pred` at every element of `dom`. Out-of-range errors are
/// counted as skips; budget errors turn the report into budget-exceeded.
pub fn check_predicate(
    name: &str,
    anchor: &str,
    dom: &Domain,
    cfg: &CheckConfig,
    pred: &(dyn Fn(&Value) -> Result<Option<Witness>> + Sync),
) -> Result<LawReport> {
    let (elems, pre_skipped) = match dom.elements(cfg) {
        Ok(x) => x,
        Err(e) if e.is_budget() => return Ok(LawReport::budget_exceeded(name, anchor, &e)),
        Err(e) => return Err(e),
    };
    let outcomes: Vec<Outcome> = elems
        .par_iter()
        .map(|v| match pred(v) {
            Ok(None) => Outcome::Ok,
            Ok(Some(w)) => Outcome::Fail(Box::new(w)),
            Err(e) if e.is_out_of_range() => Outcome::Skip,
            Err(e) => Outcome::Err(e),
        })
        .collect();
    let mut report = LawReport::pass(name, anchor, 0);
    report.skipped = pre_skipped;
    for o in outcomes {
        match o {
            Outcome::Ok => report.checked += 1,
            Outcome::Skip => report.skipped += 1,
            Outcome::Fail(w) => {
                report.checked += 1;
                report.set_fail(*w);
                break;
            }
            Outcome::Err(e) if e.is_budget() => return Ok(LawReport::budget_exceeded(name, anchor, &e)),
            Outcome::Err(e) => return Err(e),
        }
    }
    if let Domain::Sampled { label, .. } = dom {
        report.seed = Some(cfg.seed);
        if report.status == Status::Pass {
            report.status = Status::SampledPass;
        }
        report.note(format!("{label} exceeds the element budget; checked a seeded sample"));
    }
    if report.skipped > 0 {
        let total = report.checked + report.skipped;
        report.note(format!(
            "{} of {} instances leave the truncation range and were skipped",
            report.skipped, total
        ));
    }
    Ok(report)
}

/// Checks `left(v) = right(v)` at every element of `dom`.
pub fn check_pointwise(
    name: &str,
    anchor: &str,
    dom: &Domain,
    cfg: &CheckConfig,
    left: &(dyn Fn(&Value) -> Result<Value> + Sync),
    right: &(dyn Fn(&Value) -> Result<Value> + Sync),
) -> Result<LawReport> {
    check_predicate(name, anchor, dom, cfg, &|v| {
        let l = left(v)?;
        let r = right(v)?;
        Ok(if l == r {
            None
        } else {
            Some(Witness::paths(name, v.clone(), l, r))
        })
    })
}

/// Evaluates `case` on each item in parallel, keeping the first failure
/// in list order. Out-of-range errors are skips; budget errors make the
/// report budget-exceeded.
pub fn check_cases<T: Sync>(
    name: &str,
    anchor: &str,
    cases: &[T],
    case: &(dyn Fn(&T) -> Result<Option<Witness>> + Sync),
) -> Result<LawReport> {
    let outcomes: Vec<Outcome> = cases
        .par_iter()
        .map(|c| match case(c) {
            Ok(None) => Outcome::Ok,
            Ok(Some(w)) => Outcome::Fail(Box::new(w)),
            Err(e) if e.is_out_of_range() => Outcome::Skip,
            Err(e) => Outcome::Err(e),
        })
        .collect();
    let mut report = LawReport::pass(name, anchor, 0);
    for o in outcomes {
        match o {
            Outcome::Ok => report.checked += 1,
            Outcome::Skip => report.skipped += 1,
            Outcome::Fail(w) => {
                report.checked += 1;
                report.set_fail(*w);
                break;
            }
            Outcome::Err(e) if e.is_budget() => return Ok(LawReport::budget_exceeded(name, anchor, &e)),
            Outcome::Err(e) => return Err(e),
        }
    }
    Ok(report)
}
