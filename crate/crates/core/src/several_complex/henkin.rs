//! The Henkin kernel of a convex domain: the linear singular function, its
//! Hefer decomposition and the resulting reproducing formula.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::weights::{cf_density, cf_reproduce, check_point, holomorphy_residual, HenkinWeight};
use crate::error::{Error, Result};
use crate::forms::{leray_pullback, w_constant};
use crate::geometry::{DefiningDomain, HypersurfaceGrid};

/// `Phi(z, P) = rho(P) + sum_j d rho / d zeta_j (P) (z_j - P_j)`.
///
/// For a strictly convex domain `Re Phi(z, P) < 0` at interior `z`; a
/// vanishing value at an interior point means the domain is not convex.
pub fn henkin_phi_convex(domain: &DefiningDomain, z: &[Complex64], p: &[Complex64]) -> Result<Complex64> {
    let g = domain.d_rho(p);
    let phi = domain.rho(p) + g.iter().zip(z.iter().zip(p)).map(|(g, (a, b))| g * (a - b)).sum::<Complex64>();
    if phi.norm() < 1e-14 && domain.rho(z) < -1e-14 {
        return Err(Error::NonConvex);
    }
    Ok(phi)
}

/// `P_i(z, zeta) = -d rho / d zeta_i (zeta)`, so that
/// `sum_i (zeta_i - z_i) P_i = Phi(z, zeta)` for boundary `zeta`.
pub fn hefer_linear(domain: &DefiningDomain, _z: &[Complex64], zeta: &[Complex64]) -> Result<Vec<Complex64>> {
    let r = domain.rho(zeta).abs();
    if r > 1e-10 {
        return Err(Error::OffBoundary(r));
    }
    Ok(domain.d_rho(zeta).iter().map(|g| -g).collect())
}

/// `g(z, zeta) = rho(zeta) + sum_j d rho / d z_j (z) (z_j - zeta_j)`, with the
/// gradient taken at `z`.
pub fn g_function(domain: &DefiningDomain, z: &[Complex64], zeta: &[Complex64]) -> Complex64 {
    let g = domain.d_rho(z);
    domain.rho(zeta) + g.iter().zip(z.iter().zip(zeta)).map(|(g, (a, b))| g * (a - b)).sum::<Complex64>()
}

/// `K(z, zeta) d sigma = eta(P) ^ omega(zeta)` at every node: the numerator
/// of the factored density `K / Phi^n`. It does not depend on `z`.
pub fn henkin_numerator(domain: &DefiningDomain, grid: &HypersurfaceGrid) -> Vec<Complex64> {
    let weight = HenkinWeight::new(domain.clone());
    let n = grid.dim();
    let k = 2 * n - 1;
    (0..grid.len())
        .into_par_iter()
        .map(|node| {
            let zeta = grid.point(node);
            let tangents: Vec<&[Complex64]> = (0..k).map(|i| grid.tangent(node, i)).collect();
            let p: Vec<Complex64> = domain.d_rho(zeta).iter().map(|g| -g).collect();
            let dp = weight.dbar_hefer(zeta);
            let mut dw = vec![Complex64::new(0.0, 0.0); n * k];
            for kk in 0..n {
                for (i, t) in tangents.iter().enumerate() {
                    dw[kk * k + i] = (0..n).map(|l| dp[kk * n + l] * t[l].conj()).sum();
                }
            }
            leray_pullback(&p, &dw, &tangents)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HenkinReport {
    /// Reproduction through the Cauchy-Fantappie form with `w = P / Phi`.
    pub value: Complex64,
    /// The same integral written as `(1/(n W(n))) int f K / Phi^n d sigma`.
    pub factored_value: Complex64,
    /// Largest nodewise gap between the two densities, relative to the
    /// largest density.
    pub path_discrepancy: f64,
    /// Relative `d / d conj(z)` residual of the density.
    pub holomorphy_residual: f64,
}

pub fn henkin_reproduce(
    domain: &DefiningDomain,
    grid: &HypersurfaceGrid,
    f: &[Complex64],
    z: &[Complex64],
) -> Result<HenkinReport> {
    check_point(grid, z)?;
    let weight = HenkinWeight::new(domain.clone());
    let value = cf_reproduce(grid, &weight, f, z)?;
    let n = grid.dim();
    let direct = cf_density(grid, &weight, z)?;
    let numerator = henkin_numerator(domain, grid);
    let factored: Vec<Complex64> = numerator
        .iter()
        .enumerate()
        .map(|(node, k)| k / weight.phi(z, grid.point(node)).powu(n as u32))
        .collect();
    let scale = direct.iter().map(|d| d.norm()).fold(0.0, f64::max);
    let gap = direct
        .iter()
        .zip(&factored)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let total: Complex64 = factored
        .iter()
        .zip(f)
        .zip(grid.weights())
        .map(|((d, f), w)| d * f * *w)
        .sum();
    Ok(HenkinReport {
        value,
        factored_value: total / (n as f64 * w_constant(n)),
        path_discrepancy: if scale > 0.0 { gap / scale } else { gap },
        holomorphy_residual: holomorphy_residual(grid, &weight, z)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::dist;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi_examples() {
        let ball = DefiningDomain::ball(2);
        let p = [c(0.6, 0.0), c(0.0, 0.8)];
        let z = [c(0.1, 0.2), c(0.3, -0.1)];
        let expect = z[0] * p[0].conj() + z[1] * p[1].conj() - 1.0;
        assert!((henkin_phi_convex(&ball, &z, &p).unwrap() - expect).norm() < 1e-15);
        assert_eq!(henkin_phi_convex(&ball, &p, &p).unwrap(), c(0.0, 0.0));
        let egg = DefiningDomain::egg(2).unwrap();
        let v = henkin_phi_convex(&egg, &[c(0.0, 0.0); 2], &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((v + 1.0).norm() < 1e-15);
    }

    #[test]
    fn phi_has_negative_real_part_inside() {
        let egg = DefiningDomain::egg(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let p = egg.random_boundary_point(&mut rng);
            let b = egg.random_boundary_point(&mut rng);
            let s: f64 = rng.random_range(0.0..0.999);
            let z: Vec<Complex64> = b.iter().map(|x| s * x).collect();
            assert!(henkin_phi_convex(&egg, &z, &p).unwrap().re < 0.0);
        }
    }

    #[test]
    fn hefer_decomposition() {
        let egg = DefiningDomain::egg(2).unwrap();
        let p = hefer_linear(&egg, &[c(0.0, 0.0); 2], &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(p, vec![c(-1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            hefer_linear(&egg, &[c(0.0, 0.0); 2], &[c(0.5, 0.0), c(0.0, 0.0)]),
            Err(Error::OffBoundary(_))
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for domain in [DefiningDomain::ball(2), egg] {
            for _ in 0..1000 {
                let zeta = domain.random_boundary_point(&mut rng);
                let z: Vec<Complex64> = (0..2)
                    .map(|_| c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)))
                    .collect();
                let p = hefer_linear(&domain, &z, &zeta).unwrap();
                let s: Complex64 = p.iter().zip(zeta.iter().zip(&z)).map(|(p, (a, b))| p * (a - b)).sum();
                let phi = henkin_phi_convex(&domain, &z, &zeta).unwrap();
                assert!((s - phi).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn g_examples() {
        let egg = DefiningDomain::egg(2).unwrap();
        let g = g_function(&egg, &[c(0.9, 0.0), c(0.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((g + 0.09).norm() < 1e-15);
        let ball = DefiningDomain::ball(2);
        let zeta = [c(0.6, 0.0), c(0.0, 0.8)];
        assert!(g_function(&ball, &[c(0.0, 0.0); 2], &zeta).norm() < 1e-15);
        assert!(g_function(&ball, &zeta, &zeta).norm() < 1e-15);
    }

    #[test]
    fn g_and_phi_agree_to_second_order_at_the_boundary() {
        let egg = DefiningDomain::egg(2).unwrap();
        let p = [c(0.8, 0.0), c(0.6f64.sqrt(), 0.0)];
        let p = egg.radial_boundary_point(&p);
        for &eps in &[1e-2, 1e-3] {
            let z: Vec<Complex64> = p.iter().map(|x| x * (1.0 - eps)).collect();
            let gap = (g_function(&egg, &z, &p) - henkin_phi_convex(&egg, &z, &p).unwrap()).norm();
            let d = dist(&z, &p);
            assert!(gap < 20.0 * d * d, "{gap} {d}");
        }
    }

    #[test]
    fn henkin_reproduction() {
        let ball = DefiningDomain::ball(2);
        let grid = HypersurfaceGrid::sphere(24, 24).unwrap();
        let f: Vec<Complex64> = (0..grid.len()).map(|k| grid.point(k)[0].powu(2)).collect();
        let r = henkin_reproduce(&ball, &grid, &f, &[c(0.5, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((r.value - 0.25).norm() < 1e-5, "{r:?}");
        assert!((r.value - r.factored_value).norm() < 1e-8);
        assert!(r.path_discrepancy < 1e-8);
        assert!(r.holomorphy_residual < 1e-6, "{r:?}");
    }
}
