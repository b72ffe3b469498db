//! Admissible levels, affine weights and the label sets used by the S-matrix builders.

mod labels;
mod level;
mod weight;

pub use labels::{
    default_alpha_star, enumerate_p_plus_k, enumerate_regular, enumerate_subregular_eta,
    principal_labels, subregular_labels, wall_values, OuterAutomorphisms, PrincipalLabel,
    SubregularLabel,
};
pub use level::{make_admissible_level, AdmissibleLevel};
pub use weight::{affine_translation, coroot_coords, AffineWeight};
