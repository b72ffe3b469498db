//! Finite root systems, weights and Weyl groups.

mod cartan;
mod roots;
mod weight;
mod weyl;

pub use cartan::{CartanType, Family};
pub use roots::{Root, RootSystem};
pub use weight::Weight;
pub use weyl::{imat_mul, longest_element, CosetChain, IMatrix, WeylElement, WeylStream};

use crate::error::Result;

pub fn build_root_system(t: CartanType) -> RootSystem {
    RootSystem::new(t)
}

/// Parses e.g. `"D6"` and builds its root system.
pub fn root_system(name: &str) -> Result<RootSystem> {
    Ok(RootSystem::new(name.parse()?))
}
