//! The Bochner-Martinelli formula, for holomorphic data and in full.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::weights::check_point;
use crate::error::{Error, Result};
use crate::forms::{pullback_density, unit_ball_volume, w_constant};
use crate::geometry::{real_determinant, HypersurfaceGrid};
use crate::quadrature::gauss_legendre_unit;

/// `(1 / (n W(n))) int f(zeta) eta(conj(zeta - z)) ^ omega(zeta) / |zeta - z|^(2n)`.
pub fn bm_reproduce(grid: &HypersurfaceGrid, f: &[Complex64], z: &[Complex64]) -> Result<Complex64> {
    if f.len() != grid.len() {
        return Err(Error::NodeCountMismatch {
            expected: grid.len(),
            got: f.len(),
        });
    }
    let density = pullback_density(grid, z)?;
    let n = grid.dim();
    let total: Complex64 = density
        .iter()
        .zip(f)
        .zip(grid.weights())
        .map(|((d, f), w)| d * f * *w)
        .sum();
    Ok(total / (n as f64 * w_constant(n)))
}

/// Surface and volume terms of the Bochner-Martinelli formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BmFull {
    pub surface: Complex64,
    pub volume: Complex64,
    /// `surface - volume`, which equals `f(z)`.
    pub value: Complex64,
}

/// The full formula for `f` in `C^1` of the closure:
/// `f(z) = surface - (1 / (n |B_n|)) int_Omega sum_j (df / d conj(zeta_j))
/// conj(zeta_j - z_j) / |zeta - z|^(2n) dV`.
///
/// The volume integral uses the polar chart `zeta = z + s (b - z)` over
/// boundary nodes `b`, whose Jacobian `s^(2n-1) det[b - z, t_1, ...]`
/// cancels the singularity at `zeta = z`, leaving a smooth integrand in `s`
/// that Gauss-Legendre of order `radial_order` integrates.
pub fn bm_full<F, D>(grid: &HypersurfaceGrid, f: F, dbar_f: D, z: &[Complex64], radial_order: usize) -> Result<BmFull>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
    D: Fn(&[Complex64]) -> Vec<Complex64> + Sync,
{
    check_point(grid, z)?;
    let n = grid.dim();
    let k = 2 * n - 1;
    let samples: Vec<Complex64> = (0..grid.len()).into_par_iter().map(|i| f(grid.point(i))).collect();
    let surface = bm_reproduce(grid, &samples, z)?;

    let (s_nodes, s_weights) = gauss_legendre_unit(radial_order);
    let per_node: Vec<Result<Complex64>> = (0..grid.len())
        .into_par_iter()
        .map(|node| {
            let b = grid.point(node);
            let radial: Vec<Complex64> = b.iter().zip(z).map(|(b, z)| b - z).collect();
            let mut cols: Vec<&[Complex64]> = vec![&radial];
            cols.extend((0..k).map(|i| grid.tangent(node, i)));
            let jac = real_determinant(&cols);
            if jac <= 0.0 {
                return Err(Error::NotStarShaped(format!("{z:?}")));
            }
            let r2: f64 = radial.iter().map(|x| x.norm_sqr()).sum();
            let mut acc = Complex64::new(0.0, 0.0);
            let mut zeta = vec![Complex64::new(0.0, 0.0); n];
            for (s, ws) in s_nodes.iter().zip(&s_weights) {
                for j in 0..n {
                    zeta[j] = z[j] + *s * radial[j];
                }
                let g = dbar_f(&zeta);
                // conj(zeta - z) / |zeta - z|^(2n) * s^(2n-1) = conj(b - z) / |b - z|^(2n)
                let inner: Complex64 = g.iter().zip(&radial).map(|(g, r)| g * r.conj()).sum();
                acc += inner * *ws;
            }
            Ok(acc * jac / r2.powi(n as i32) * grid.weight(node))
        })
        .collect();
    let mut integral = Complex64::new(0.0, 0.0);
    for v in per_node {
        integral += v?;
    }
    let volume = integral / (n as f64 * unit_ball_volume(n));
    Ok(BmFull {
        surface,
        volume,
        value: surface - volume,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlanarContour;
    use crate::geometry::Curve;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(grid: &HypersurfaceGrid, f: impl Fn(&[Complex64]) -> Complex64) -> Vec<Complex64> {
        (0..grid.len()).map(|k| f(grid.point(k))).collect()
    }

    #[test]
    fn reproduces_holomorphic_functions_on_the_ball() {
        let g = HypersurfaceGrid::sphere(24, 24).unwrap();
        let ones = vec![c(1.0, 0.0); g.len()];
        assert!((bm_reproduce(&g, &ones, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap() - 1.0).norm() < 1e-10);
        let f = sample(&g, |p| p[0] * p[1]);
        let v = bm_reproduce(&g, &f, &[c(0.3, 0.0), c(0.2, 0.0)]).unwrap();
        assert!((v - 0.06).norm() < 1e-5, "{v}");
    }

    #[test]
    fn one_variable_case_is_cauchy_pompeiu() {
        let contour = PlanarContour::new(Curve::unit_circle(), 128).unwrap();
        let g = HypersurfaceGrid::from_contour(&contour).unwrap();
        let r = bm_full(&g, |p| p[0].conj(), |_| vec![c(1.0, 0.0)], &[c(0.3, 0.0)], 16).unwrap();
        assert!((r.value - 0.3).norm() < 1e-12, "{r:?}");
    }

    #[test]
    fn full_formula_on_the_ball() {
        let g = HypersurfaceGrid::sphere(24, 24).unwrap();
        let z = [c(0.2, 0.0), c(0.1, 0.0)];
        let r = bm_full(&g, |p| p[0].conj(), |_| vec![c(1.0, 0.0), c(0.0, 0.0)], &z, 16).unwrap();
        assert!((r.value - 0.2).norm() < 1e-4, "{r:?}");
        let z = [c(0.4, 0.0), c(0.0, 0.0)];
        let r = bm_full(&g, |p| c(p[0].norm_sqr(), 0.0), |p| vec![p[0], c(0.0, 0.0)], &z, 16).unwrap();
        assert!((r.value - 0.16).norm() < 1e-4, "{r:?}");
        let r = bm_full(&g, |p| p[0] * p[0], |_| vec![c(0.0, 0.0); 2], &z, 8).unwrap();
        assert!(r.volume.norm() < 1e-12);
    }
}
