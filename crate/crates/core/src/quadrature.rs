//! Quadrature rules shared by the contour, area and hypersurface integrators.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// Gauss-Legendre nodes and weights mapped to `[0, 1]`.
pub fn gauss_legendre_unit(order: usize) -> (Vec<f64>, Vec<f64>) {
    let order = NonZeroUsize::new(order.max(1)).unwrap();
    let rule = GaussLegendre::new(order);
    let nodes = rule.nodes().map(|x| 0.5 * (x + 1.0)).collect();
    let weights = rule.weights().map(|w| 0.5 * w).collect();
    (nodes, weights)
}

/// Equispaced periodic nodes `2 pi k / n` on `[0, 2 pi)`.
pub fn periodic_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}
