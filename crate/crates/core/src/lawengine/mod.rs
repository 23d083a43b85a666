//! Distributive laws and weak distributive laws as data, with the
//! round-trip constructions between laws, liftings and extensions.

mod composite;
mod convert;
mod delta;
mod law;
mod lifting;

pub use composite::*;
pub use convert::*;
pub use delta::*;
pub use law::*;
pub use lifting::*;
