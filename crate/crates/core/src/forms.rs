//! Pullbacks of Cauchy-Fantappie type forms `eta(w) ^ omega(zeta)` to
//! boundary parameter domains.
//!
//! Here `omega(zeta) = d zeta_1 ^ ... ^ d zeta_n` and
//! `eta(w) = sum_j (-1)^(j-1) w_j  /\_{k != j} d w_k`. Evaluated on tangent
//! vectors `t_1, ..., t_{2n-1}` the form is a sum of complex determinants.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::HypersurfaceGrid;

/// Guard distance below which a kernel evaluation counts as near-singular.
pub const GUARD_DISTANCE: f64 = 1e-6;

/// Volume `pi^n / n!` of the unit ball in C^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * std::f64::consts::PI / k as f64)
}

/// `W(n) = (-1)^(n(n-1)/2) (2i)^n pi^n / n!`, so that the integral of
/// `eta(conj zeta) ^ omega(zeta)` over the unit sphere is `n W(n)`.
pub fn w_constant(n: usize) -> Complex64 {
    let q = n * (n - 1) / 2;
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    sign * Complex64::new(0.0, 2.0).powu(n as u32) * unit_ball_volume(n)
}

/// Determinant of a small dense row-major complex matrix; destroys `m`.
pub fn complex_determinant(m: &mut [Complex64], size: usize) -> Complex64 {
    debug_assert_eq!(m.len(), size * size);
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..size {
        let pivot = (col..size)
            .max_by(|&a, &b| m[a * size + col].norm().total_cmp(&m[b * size + col].norm()))
            .unwrap();
        let p = m[pivot * size + col];
        if p == Complex64::new(0.0, 0.0) {
            return p;
        }
        if pivot != col {
            for c in 0..size {
                m.swap(pivot * size + c, col * size + c);
            }
            det = -det;
        }
        det *= p;
        for r in col + 1..size {
            let f = m[r * size + col] / p;
            if f != Complex64::new(0.0, 0.0) {
                for c in col..size {
                    let v = m[col * size + c];
                    m[r * size + c] -= f * v;
                }
            }
        }
    }
    det
}

/// `eta(w) ^ omega(zeta)` evaluated on `tangents`, given `w` and the values
/// `dw[k][i] = dw_k(t_i)` (row-major, `2n - 1` columns). Only the
/// anti-holomorphic part of `dw` contributes.
pub fn leray_pullback(w: &[Complex64], dw: &[Complex64], tangents: &[&[Complex64]]) -> Complex64 {
    let n = w.len();
    let k = 2 * n - 1;
    debug_assert_eq!(dw.len(), n * k);
    debug_assert_eq!(tangents.len(), k);
    let mut m = [Complex64::new(0.0, 0.0); 49];
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let mut row = 0;
        for kk in (0..n).filter(|&kk| kk != j) {
            m[row * k..(row + 1) * k].copy_from_slice(&dw[kk * k..(kk + 1) * k]);
            row += 1;
        }
        for l in 0..n {
            for (i, t) in tangents.iter().enumerate() {
                m[row * k + i] = t[l];
            }
            row += 1;
        }
        let d = complex_determinant(&mut m[..k * k], k);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * w[j] * d;
    }
    total
}

/// `eta(conj(zeta - z)) ^ omega(zeta) / |zeta - z|^(2n)` on the tangents.
pub fn bochner_martinelli_pullback(
    zeta: &[Complex64],
    z: &[Complex64],
    tangents: &[&[Complex64]],
) -> Complex64 {
    let n = zeta.len();
    let k = 2 * n - 1;
    let w: Vec<Complex64> = zeta.iter().zip(z).map(|(a, b)| (a - b).conj()).collect();
    let r2: f64 = w.iter().map(|x| x.norm_sqr()).sum();
    let mut dw = vec![Complex64::new(0.0, 0.0); n * k];
    for kk in 0..n {
        for (i, t) in tangents.iter().enumerate() {
            dw[kk * k + i] = t[kk].conj();
        }
    }
    leray_pullback(&w, &dw, tangents) / r2.powi(n as i32)
}

/// Bochner-Martinelli surface density at each grid node, without the
/// quadrature weight.
pub fn pullback_density(grid: &HypersurfaceGrid, z: &[Complex64]) -> Result<Vec<Complex64>> {
    if z.len() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: z.len(),
        });
    }
    let d = grid.distance_to_nodes(z);
    if d < GUARD_DISTANCE {
        return Err(Error::GuardViolation {
            distance: d,
            guard: GUARD_DISTANCE,
        });
    }
    let k = 2 * grid.dim() - 1;
    Ok((0..grid.len())
        .into_par_iter()
        .map(|node| {
            let t: Vec<&[Complex64]> = (0..k).map(|i| grid.tangent(node, i)).collect();
            bochner_martinelli_pullback(grid.point(node), z, &t)
        })
        .collect())
}

/// Weighted sum `sum_k weight_k values_k` over grid nodes.
pub fn grid_integrate(grid: &HypersurfaceGrid, values: &[Complex64]) -> Result<Complex64> {
    if values.len() != grid.len() {
        return Err(Error::NodeCountMismatch {
            expected: grid.len(),
            got: values.len(),
        });
    }
    Ok(values.iter().zip(grid.weights()).map(|(v, w)| v * w).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn w_constant_values() {
        assert!((w_constant(1) - c(0.0, 2.0 * PI)).norm() < 1e-15);
        assert!((w_constant(2) - c(2.0 * PI * PI, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn determinant_matches_closed_form() {
        let a = [c(1.0, 2.0), c(0.5, -1.0), c(-2.0, 0.3), c(0.0, 1.0)];
        let mut m = a;
        let d = complex_determinant(&mut m, 2);
        assert!((d - (a[0] * a[3] - a[1] * a[2])).norm() < 1e-14);
    }

    #[test]
    fn circle_density_integrates_to_w1() {
        let g = HypersurfaceGrid::circle(32).unwrap();
        let d = pullback_density(&g, &[c(0.0, 0.0)]).unwrap();
        let v = grid_integrate(&g, &d).unwrap();
        assert!((v - w_constant(1)).norm() < 1e-12);
    }

    #[test]
    fn sphere_density_integrates_to_n_w() {
        let g = HypersurfaceGrid::sphere(16, 16).unwrap();
        let d = pullback_density(&g, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let v = grid_integrate(&g, &d).unwrap();
        assert!((v - 2.0 * w_constant(2)).norm() < 1e-10, "{v}");
        // the density is independent of the interior point
        let d = pullback_density(&g, &[c(0.2, -0.1), c(0.0, 0.3)]).unwrap();
        let v = grid_integrate(&g, &d).unwrap();
        assert!((v - 2.0 * w_constant(2)).norm() < 1e-6, "{v}");
    }

    #[test]
    fn guard_rejects_nodes() {
        let g = HypersurfaceGrid::circle(8).unwrap();
        assert!(matches!(
            pullback_density(&g, &[c(1.0, 0.0)]),
            Err(Error::GuardViolation { .. })
        ));
    }
}
