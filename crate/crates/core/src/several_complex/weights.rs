//! Cauchy-Fantappie weights and the reproducing formula they generate.
//!
//! A weight is a vector field `w(z, zeta)` with `sum_j w_j (zeta_j - z_j) = 1`.
//! For holomorphic `f` the integral of `f eta(w) ^ omega(zeta)` over the
//! boundary, divided by `n W(n)`, is `f(z)` whatever the weight.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{leray_pullback, w_constant, GUARD_DISTANCE};
use crate::geometry::{DefiningDomain, HypersurfaceGrid};

/// Normalization residual above which a weight is rejected.
pub const WEIGHT_TOLERANCE: f64 = 1e-8;

pub trait CfWeight: Sync {
    fn name(&self) -> &'static str;

    /// `w(z, zeta)`.
    fn value(&self, z: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64>;

    /// `d w_k / d conj(zeta_l)`, row-major `n x n`. The holomorphic
    /// derivatives never contribute to `eta(w) ^ omega(zeta)`.
    fn dbar(&self, z: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64>;

    /// `|sum_j w_j (zeta_j - z_j) - 1|`.
    fn normalization_residual(&self, z: &[Complex64], zeta: &[Complex64]) -> f64 {
        let w = self.value(z, zeta);
        let s: Complex64 = w.iter().zip(zeta.iter().zip(z)).map(|(w, (a, b))| w * (a - b)).sum();
        (s - 1.0).norm()
    }
}

/// `w_j = conj(zeta_j - z_j) / |zeta - z|^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BochnerMartinelliWeight;

impl CfWeight for BochnerMartinelliWeight {
    fn name(&self) -> &'static str {
        "bochner_martinelli"
    }

    fn value(&self, z: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64> {
        let r2: f64 = zeta.iter().zip(z).map(|(a, b)| (a - b).norm_sqr()).sum();
        zeta.iter().zip(z).map(|(a, b)| (a - b).conj() / r2).collect()
    }

    fn dbar(&self, z: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64> {
        let n = z.len();
        let d: Vec<Complex64> = zeta.iter().zip(z).map(|(a, b)| a - b).collect();
        let r2: f64 = d.iter().map(|x| x.norm_sqr()).sum();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            for l in 0..n {
                let delta = if k == l { 1.0 / r2 } else { 0.0 };
                out[k * n + l] = delta - d[k].conj() * d[l] / (r2 * r2);
            }
        }
        out
    }
}

/// The unit-ball weight `w_j = conj(zeta_j) / (1 - z . conj(zeta))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BallWeight;

impl CfWeight for BallWeight {
    fn name(&self) -> &'static str {
        "ball"
    }

    fn value(&self, z: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64> {
        let d = ball_denominator(z, zeta);
        zeta.iter().map(|x| x.conj() / d).collect()
    }

    fn dbar(&self, z: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64> {
        let n = z.len();
        let d = ball_denominator(z, zeta);
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            for l in 0..n {
                let delta = if k == l { 1.0 / d } else { Complex64::new(0.0, 0.0) };
                out[k * n + l] = delta + zeta[k].conj() * z[l] / (d * d);
            }
        }
        out
    }
}

fn ball_denominator(z: &[Complex64], zeta: &[Complex64]) -> Complex64 {
    1.0 - z.iter().zip(zeta).map(|(a, b)| a * b.conj()).sum::<Complex64>()
}

/// The Henkin weight `w_i = P_i / Phi` of a convex domain, where
/// `Phi(z, zeta) = rho(zeta) + sum_j d rho / d zeta_j (zeta) (z_j - zeta_j)` and
/// `P_i = -d rho / d zeta_i (zeta)` is its Hefer decomposition.
#[derive(Debug, Clone)]
pub struct HenkinWeight {
    domain: DefiningDomain,
}

impl HenkinWeight {
    pub fn new(domain: DefiningDomain) -> Self {
        HenkinWeight { domain }
    }

    pub fn domain(&self) -> &DefiningDomain {
        &self.domain
    }

    pub(crate) fn phi(&self, z: &[Complex64], zeta: &[Complex64]) -> Complex64 {
        let g = self.domain.d_rho(zeta);
        self.domain.rho(zeta)
            + g.iter().zip(z.iter().zip(zeta)).map(|(g, (a, b))| g * (a - b)).sum::<Complex64>()
    }

    /// `d Phi / d conj(zeta_l)`.
    pub(crate) fn dbar_phi(&self, z: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64> {
        let n = z.len();
        let g = self.domain.d_rho(zeta);
        let m = self.domain.mixed_hessian(zeta);
        (0..n)
            .map(|l| {
                g[l].conj()
                    + (0..n).map(|j| m[j * n + l] * (z[j] - zeta[j])).sum::<Complex64>()
            })
            .collect()
    }

    /// `d P_k / d conj(zeta_l) = -d^2 rho / d zeta_k d conj(zeta_l)`.
    pub(crate) fn dbar_hefer(&self, zeta: &[Complex64]) -> Vec<Complex64> {
        self.domain.mixed_hessian(zeta).iter().map(|x| -x).collect()
    }
}

impl CfWeight for HenkinWeight {
    fn name(&self) -> &'static str {
        "henkin"
    }

    fn value(&self, z: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64> {
        let phi = self.phi(z, zeta);
        self.domain.d_rho(zeta).iter().map(|g| -g / phi).collect()
    }

    fn dbar(&self, z: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64> {
        let n = z.len();
        let phi = self.phi(z, zeta);
        let dphi = self.dbar_phi(z, zeta);
        let dp = self.dbar_hefer(zeta);
        let p: Vec<Complex64> = self.domain.d_rho(zeta).iter().map(|g| -g).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            for l in 0..n {
                out[k * n + l] = dp[k * n + l] / phi - p[k] * dphi[l] / (phi * phi);
            }
        }
        out
    }
}

/// `eta(w) ^ omega(zeta)` on the tangents of one grid node.
pub(crate) fn node_density<W: CfWeight + ?Sized>(
    grid: &HypersurfaceGrid,
    weight: &W,
    node: usize,
    z: &[Complex64],
) -> Complex64 {
    let n = grid.dim();
    let k = 2 * n - 1;
    let zeta = grid.point(node);
    let tangents: Vec<&[Complex64]> = (0..k).map(|i| grid.tangent(node, i)).collect();
    let w = weight.value(z, zeta);
    let dbar = weight.dbar(z, zeta);
    let mut dw = vec![Complex64::new(0.0, 0.0); n * k];
    for kk in 0..n {
        for (i, t) in tangents.iter().enumerate() {
            dw[kk * k + i] = (0..n).map(|l| dbar[kk * n + l] * t[l].conj()).sum();
        }
    }
    leray_pullback(&w, &dw, &tangents)
}

pub(crate) fn check_point(grid: &HypersurfaceGrid, z: &[Complex64]) -> Result<()> {
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
    Ok(())
}

/// Largest normalization residual of `weight` over the grid nodes.
pub fn weight_residual<W: CfWeight + ?Sized>(grid: &HypersurfaceGrid, weight: &W, z: &[Complex64]) -> f64 {
    (0..grid.len())
        .into_par_iter()
        .map(|k| weight.normalization_residual(z, grid.point(k)))
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max)
}

/// Pullback of `eta(w) ^ omega(zeta)` at every node, without quadrature
/// weights and without the `1 / (n W(n))` normalization.
pub fn cf_density<W: CfWeight + ?Sized>(
    grid: &HypersurfaceGrid,
    weight: &W,
    z: &[Complex64],
) -> Result<Vec<Complex64>> {
    check_point(grid, z)?;
    Ok((0..grid.len())
        .into_par_iter()
        .map(|node| node_density(grid, weight, node, z))
        .collect())
}

/// `(1 / (n W(n))) int f eta(w) ^ omega(zeta)`.
pub fn cf_reproduce<W: CfWeight + ?Sized>(
    grid: &HypersurfaceGrid,
    weight: &W,
    f: &[Complex64],
    z: &[Complex64],
) -> Result<Complex64> {
    if f.len() != grid.len() {
        return Err(Error::NodeCountMismatch {
            expected: grid.len(),
            got: f.len(),
        });
    }
    check_point(grid, z)?;
    let residual = weight_residual(grid, weight, z);
    if !(residual <= WEIGHT_TOLERANCE) {
        return Err(Error::WeightNormalization(residual));
    }
    let density = cf_density(grid, weight, z)?;
    let n = grid.dim();
    let total: Complex64 = density
        .iter()
        .zip(f)
        .zip(grid.weights())
        .map(|((d, f), w)| d * f * *w)
        .sum();
    Ok(total / (n as f64 * w_constant(n)))
}

/// Number of points on the circle stencil used for `d / d conj(z)`.
const STENCIL_POINTS: usize = 8;

/// `d g / d conj(z_j)` at `z` by the circle rule
/// `(1 / (K h)) sum_k g(z + h e_j omega_k) omega_k`. It annihilates
/// holomorphic terms of degree below `K - 1` exactly; for general smooth `g`
/// the error is `O(h^2)`.
pub fn dbar_stencil<G>(g: G, z: &[Complex64], j: usize, h: f64) -> Complex64
where
    G: Fn(&[Complex64]) -> Complex64,
{
    let mut p = z.to_vec();
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..STENCIL_POINTS {
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / STENCIL_POINTS as f64);
        p[j] = z[j] + h * omega;
        total += g(&p) * omega;
    }
    total / (STENCIL_POINTS as f64 * h)
}

/// Largest `|d / d conj(z_j)|` of the kernel density over all nodes and
/// coordinates, relative to the largest density magnitude. Holomorphic
/// kernels give rounding-level values.
pub fn holomorphy_residual<W: CfWeight + ?Sized>(
    grid: &HypersurfaceGrid,
    weight: &W,
    z: &[Complex64],
) -> Result<f64> {
    check_point(grid, z)?;
    let n = grid.dim();
    let h = (grid.distance_to_nodes(z) / 8.0).min(1e-2);
    let per_node: Vec<(f64, f64)> = (0..grid.len())
        .into_par_iter()
        .map(|node| {
            let scale = node_density(grid, weight, node, z).norm();
            let worst = (0..n)
                .map(|j| dbar_stencil(|p| node_density(grid, weight, node, p), z, j, h).norm())
                .fold(0.0, f64::max);
            (worst, scale)
        })
        .collect();
    let worst = per_node.iter().map(|p| p.0).fold(0.0, f64::max);
    let scale = per_node.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_dbar<W: CfWeight>(weight: &W, z: &[Complex64], zeta: &[Complex64]) {
        let n = z.len();
        let analytic = weight.dbar(z, zeta);
        for k in 0..n {
            for l in 0..n {
                let fd = dbar_stencil(|p| weight.value(z, p)[k], zeta, l, 1e-5);
                assert!((fd - analytic[k * n + l]).norm() < 1e-8, "{} {k} {l}", weight.name());
            }
        }
    }

    #[test]
    fn weight_derivatives_match_stencils() {
        let z = [c(0.2, -0.1), c(0.1, 0.3)];
        let zeta = [c(0.6, 0.5), c(-0.3, 0.4)];
        check_dbar(&BochnerMartinelliWeight, &z, &zeta);
        check_dbar(&BallWeight, &z, &zeta);
        check_dbar(&HenkinWeight::new(DefiningDomain::egg(2).unwrap()), &z, &zeta);
        check_dbar(&HenkinWeight::new(DefiningDomain::ball(2)), &z, &zeta);
    }

    #[test]
    fn weights_are_normalized_on_the_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ball = DefiningDomain::ball(2);
        let egg = DefiningDomain::egg(2).unwrap();
        let z = [c(0.1, 0.2), c(-0.3, 0.1)];
        for _ in 0..100 {
            let zeta = ball.random_boundary_point(&mut rng);
            assert!(BallWeight.normalization_residual(&z, &zeta) < 1e-13);
            assert!(BochnerMartinelliWeight.normalization_residual(&z, &zeta) < 1e-13);
            let zeta = egg.random_boundary_point(&mut rng);
            assert!(HenkinWeight::new(egg.clone()).normalization_residual(&z, &zeta) < 1e-12);
        }
    }

    #[test]
    fn henkin_and_ball_weights_coincide_on_the_ball() {
        let henkin = HenkinWeight::new(DefiningDomain::ball(2));
        let z = [c(0.3, 0.0), c(0.0, -0.4)];
        let zeta = [c(0.6, 0.0), c(0.0, 0.8)];
        let a = henkin.value(&z, &zeta);
        let b = BallWeight.value(&z, &zeta);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn stencil_recovers_conjugate_derivative() {
        let z = [c(0.3, 0.2)];
        let d = dbar_stencil(|p| p[0].conj() * p[0] + p[0].powu(3), &z, 0, 1e-2);
        assert!((d - z[0]).norm() < 1e-13);
    }
}
