//! The Levi polynomial and its local separation property.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::domain::{dist, random_point_in_ball};
use crate::geometry::{CnPoint, DefiningDomain, LeviConstants, Region};

/// `rho(P) + sum_j rho_j(P) (z_j - P_j) + (1/2) sum_jk rho_jk(P) (z_j - P_j)(z_k - P_k)`.
pub fn levi_polynomial(domain: &DefiningDomain, p: &[Complex64], z: &[Complex64]) -> Complex64 {
    let n = domain.dim();
    let g = domain.d_rho(p);
    let h = domain.holo_hessian(p);
    let d: Vec<Complex64> = z.iter().zip(p).map(|(a, b)| a - b).collect();
    let mut total = Complex64::new(domain.rho(p), 0.0);
    for j in 0..n {
        total += g[j] * d[j];
        for k in 0..n {
            total += 0.5 * h[j * n + k] * d[j] * d[k];
        }
    }
    total
}

/// Radius of the region on which the separation constants are estimated.
pub const LOCAL_RADIUS: f64 = 0.3;

/// Constants of the defining function on the ball of radius
/// [`LOCAL_RADIUS`] about `p`.
pub fn local_constants(domain: &DefiningDomain, p: &[Complex64]) -> LeviConstants {
    domain.estimate_constants(
        &Region::Near {
            center: CnPoint(p.to_vec()),
            radius: LOCAL_RADIUS,
        },
        2000,
        0x1e71,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// `min [rho(z) - gamma |z - P|^2 / 2 - 2 Re L_P(z)]` over the samples.
    pub margin: f64,
    pub worst: CnPoint,
    pub lambda: f64,
    pub gamma: f64,
    pub k_bound: f64,
}

/// Evaluates the separation margin at the given samples, which must lie in
/// the ball of radius `lambda = gamma / (2 (K + 1))` about `p`.
pub fn levi_separation_check(domain: &DefiningDomain, p: &[Complex64], samples: &[CnPoint]) -> Result<SeparationReport> {
    let constants = local_constants(domain, p);
    let lambda = constants.separation_radius();
    let gamma = constants.gamma;
    let mut margin = f64::INFINITY;
    let mut worst = CnPoint(p.to_vec());
    for z in samples {
        let r = dist(z, p);
        if r >= lambda {
            return Err(Error::OutsideNeighborhood { distance: r, radius: lambda });
        }
        let v = domain.rho(z) - 0.5 * gamma * r * r - 2.0 * levi_polynomial(domain, p, z).re;
        if v < margin {
            margin = v;
            worst = z.clone();
        }
    }
    if samples.is_empty() {
        margin = 0.0;
    }
    Ok(SeparationReport {
        margin,
        worst,
        lambda,
        gamma,
        k_bound: constants.k_bound,
    })
}

/// `count` points drawn uniformly from the separation neighborhood of `p`.
pub fn separation_samples(domain: &DefiningDomain, p: &[Complex64], count: usize, seed: u64) -> Vec<CnPoint> {
    let lambda = local_constants(domain, p).separation_radius();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| CnPoint(random_point_in_ball(&mut rng, p, lambda * (1.0 - 1e-12))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ball_levi_polynomial() {
        let ball = DefiningDomain::ball(2);
        let p = [c(1.0, 0.0), c(0.0, 0.0)];
        let z = [c(0.3, 0.7), c(-0.2, 0.1)];
        assert!((levi_polynomial(&ball, &p, &z) - (z[0] - 1.0)).norm() < 1e-15);
        assert_eq!(levi_polynomial(&ball, &p, &p), c(0.0, 0.0));
        let z = [c(0.9, 0.0), c(0.0, 0.0)];
        let l = levi_polynomial(&ball, &p, &z);
        assert!((2.0 * l.re + 0.2).abs() < 1e-15);
        assert!((2.0 * l.re - (ball.rho(&z) - 0.01)).abs() < 1e-15);
    }

    #[test]
    fn separation_on_the_ball_is_an_equality_case() {
        let ball = DefiningDomain::ball(2);
        let p = [c(0.6, 0.0), c(0.0, 0.8)];
        let samples = separation_samples(&ball, &p, 500, 2);
        let r = levi_separation_check(&ball, &p, &samples).unwrap();
        assert_eq!(r.gamma, 1.0);
        for z in &samples {
            let d = dist(z, &p);
            let v = ball.rho(z) - 0.5 * d * d - 2.0 * levi_polynomial(&ball, &p, z).re;
            assert!((v - 0.5 * d * d).abs() < 1e-15);
        }
        assert!(r.margin >= -1e-10);
    }

    #[test]
    fn separation_on_the_egg() {
        let egg = DefiningDomain::egg(2).unwrap();
        let p = [c(0.0, 0.0), c(1.0, 0.0)];
        let samples = separation_samples(&egg, &p, 1000, 5);
        let r = levi_separation_check(&egg, &p, &samples).unwrap();
        assert!(r.margin >= -1e-10, "{r:?}");
        let at_p = levi_separation_check(&egg, &p, &[CnPoint(p.to_vec())]).unwrap();
        assert_eq!(at_p.margin, 0.0);
    }

    #[test]
    fn samples_outside_the_neighborhood_are_rejected() {
        let ball = DefiningDomain::ball(2);
        let p = [c(1.0, 0.0), c(0.0, 0.0)];
        let far = CnPoint(vec![c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            levi_separation_check(&ball, &p, &[far]),
            Err(Error::OutsideNeighborhood { .. })
        ));
    }
}
