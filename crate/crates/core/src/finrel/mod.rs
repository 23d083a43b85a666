//! Finite values, carriers, functions and relations.

mod finfn;
mod finset;
pub mod json;
mod relation;
mod square;
mod value;

pub use finfn::{Arrow, FinFn};
pub use finset::FinSet;
pub use relation::{check_adjunction, FinRel};
pub use square::{is_weak_pullback, pullback, split_idempotent, weak_pullback_gap, Square};
pub use value::{Bipointed, Value};
