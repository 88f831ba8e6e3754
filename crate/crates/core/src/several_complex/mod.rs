//! Integral formulas in C^n and the convex-domain geometry behind them.

pub mod bm;
pub mod finite_type;
pub mod henkin;
pub mod levi;
pub mod weights;

pub use bm::{bm_full, bm_reproduce, BmFull};
pub use finite_type::{fiber_ratio, finite_type_bounds, sweep_radii, FiniteTypeReport, PairMinimum, TangentMinimum};
pub use henkin::{g_function, hefer_linear, henkin_numerator, henkin_phi_convex, henkin_reproduce, HenkinReport};
pub use levi::{levi_polynomial, levi_separation_check, local_constants, separation_samples, SeparationReport};
pub use weights::{
    cf_density, cf_reproduce, dbar_stencil, holomorphy_residual, weight_residual, BallWeight,
    BochnerMartinelliWeight, CfWeight, HenkinWeight,
};
