//! Monads on finite sets, relation lifting and weak distributive laws,
//! checked exhaustively on small carriers.

pub mod barr;
pub mod catalog;
pub mod error;
pub mod finrel;
pub mod lawengine;
pub mod monadkit;
pub mod report;
pub mod showcase;
pub mod zoo;

pub use error::{Budget, Error, Result};
pub use report::{LawReport, Status, Witness};
