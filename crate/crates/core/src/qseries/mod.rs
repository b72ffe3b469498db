//! Truncated `q`-series, two-variable characters and lattice theta functions.
//!
//! Formal objects carry exact rational coefficients. Theta functions are evaluated numerically
//! with an explicit Gaussian tail bound.

mod characters;
mod identities;
mod series;
mod theta;
mod two_var;

pub use characters::{
    affine_denominator_inverse, irreducible_character, kw_numerator, principal_generator_weights,
    required_radius, verma_character, w_vacuum_character, weyl_dimensions, weyl_kac_character,
    AffineWeylElement, ReflectionGroup,
};
pub use identities::{brst_character, brst_closed_form, brst_factors, triple_product_check, BrstCharacter, TripleProductReport};
pub use series::{eta_like_product, Coeff, QSeries};
pub use theta::{
    modular_transform_check, theta_at_radius, theta_eval, theta_eval_capped, ModularReport, ThetaSpec, ThetaValue,
    RADIUS_CAP,
};
pub use two_var::{ProductForm, TwoVarCharacter};
