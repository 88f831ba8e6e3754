//! Numerical reproducing kernels: planar Cauchy, Bergman and Szego kernels,
//! the Kerzman-Stein expansion of the Szego projection, and the
//! Bochner-Martinelli, Cauchy-Fantappie and Henkin kernels in C^n.

pub mod cli;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod kerzman_stein;
pub mod planar_kernels;
pub mod quadrature;
pub mod several_complex;
pub mod testfn;

pub use error::{Error, Result};
pub use num_complex::Complex64;
