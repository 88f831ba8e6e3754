//! The Kerzman-Stein expansion of the Szegő projection on planar domains
//! and the periodic fractional operators.

pub mod fractional;
pub mod operator;

pub use fractional::{frac_diff, frac_diff_real, frac_int, frac_int_real};
pub use operator::{
    cauchy_operator, compactness_profile, difference_identity_residual, ks_operator,
    operator_identities_report, reproducing_density, szego_kernel_extract, szego_projection_direct,
    szego_projection_neumann, BoundaryOperator, IdentityResiduals, NeumannProjection, SzegoKernel,
};
