//! Symbolic lambda-brackets for free-field vertex (super)algebras.
//!
//! Fields are linear combinations of `1`, `∂^m g` and binary normally ordered products with
//! coefficients in exact rational functions of named parameters. Brackets are reduced to a
//! generator table by sesquilinearity, the Wick formula, skew-symmetry and quasi-commutativity.

pub mod algebra;
pub mod checks;
pub mod error;
pub mod field;
pub mod lie;
pub mod presets;
pub mod scalar;

pub use algebra::{Algebra, AlgebraBuilder, Generator};
pub use checks::{brst_nilpotency_abelian, virasoro_test, NilpotencyReport, VirasoroOutcome};
pub use error::{OpeError, Result};
pub use field::{Atom, Field, LambdaPoly, Mono};
pub use presets::{
    affine, brst_principal, charged_fermions, fermion_current, heisenberg, sl2_defining, sugawara, tensor,
    verify_fermion_currents, AffinePreset,
};
pub use scalar::{Poly, Scalar};
