//! S-matrices: Kac-Peterson for integrable levels, principal and subregular for admissible levels.

mod integrable;
mod phase_sum;
mod principal;
mod smatrix;
mod subregular;

pub use integrable::{kac_peterson, kac_peterson_with};
pub use phase_sum::{roots_of_unity, Buckets, PhaseSum, SumWeight};
pub use principal::{fkw_principal, principal_factors, PrincipalFactors, PROPORTIONALITY_TOL};
pub use smatrix::{mat_mul, Label, Normalization, Provenance, SMatrix, UNITARY_TOL};
pub use subregular::{
    conservative_rotation, degenerate_kernel, degenerate_kernel_at_zero, rotation_to, subregular_factors,
    subregular_s, subregular_s_with, wall_root, Probe, SubregularFactors, SubregularOptions,
};
