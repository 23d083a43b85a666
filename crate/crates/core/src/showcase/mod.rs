//! Worked examples at finite scale: the Vietoris and filter monads over
//! discrete spaces, quantales, subsemigroups, normal bands, and the
//! continuous-lattice apparatus on finite lattices.

mod algebraic;
mod continuity;
mod lattice;
mod topology;
mod vietoris;

pub use algebraic::*;
pub use continuity::*;
pub use lattice::*;
pub use topology::*;
pub use vietoris::*;
