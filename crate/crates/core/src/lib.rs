//! Modular data for integrable affine and exceptional affine W-algebras.
//!
//! The crate is organized bottom-up: [`liealg`] supplies exact root-system and Weyl-group
//! data, [`affine`] enumerates label sets, [`qseries`] handles formal characters and theta
//! functions, [`modular`] builds S-matrices from streamed Weyl sums, and [`fusion`] turns a
//! unitary S-matrix into Verlinde fusion rules.

pub mod error;
pub mod fusion;
pub mod affine;
pub mod linalg;
pub mod modular;
pub mod liealg;
pub mod par;
pub mod qseries;

pub use error::{Error, Result};
