//! Domains in C^n given by a defining function.
//!
//! Every domain here belongs to the convex Reinhardt family
//! `rho(z) = sum_j |z_j|^(2 m_j) - 1` with integer exponents `m_j >= 1`:
//! the unit ball is all exponents one, the egg `|z1|^2 + |z2|^(2m) < 1` is
//! `[1, m]`. All derivatives are closed-form Wirtinger derivatives.

use std::ops::{Deref, Index};

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of C^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CnPoint(pub Vec<Complex64>);

impl CnPoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        CnPoint(coords)
    }

    pub fn from_re_im(pairs: &[[f64; 2]]) -> Self {
        CnPoint(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Deref for CnPoint {
    type Target = [Complex64];
    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl Index<usize> for CnPoint {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<Vec<Complex64>> for CnPoint {
    fn from(v: Vec<Complex64>) -> Self {
        CnPoint(v)
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Constants attached to a defining function on a region: the
/// plurisubharmonicity floor `gamma`, gradient floor `kappa`, the bound `K`
/// on derivatives up to order three, and the collar width `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeviConstants {
    pub delta: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub k_bound: f64,
}

impl LeviConstants {
    /// Radius `gamma / (2 (K + 1))` of the neighborhood in which the Levi
    /// polynomial separates.
    pub fn separation_radius(&self) -> f64 {
        0.5 * self.gamma / (self.k_bound + 1.0)
    }
}

/// Where constants are estimated.
#[derive(Debug, Clone)]
pub enum Region {
    /// `|rho| < delta`.
    Collar { delta: f64 },
    /// Euclidean ball about a point.
    Near { center: CnPoint, radius: f64 },
}

#[derive(Debug, Clone)]
pub struct DefiningDomain {
    exponents: Vec<u32>,
    constants: LeviConstants,
}

const COLLAR_DELTA: f64 = 0.1;
const CONSTANT_SAMPLES: usize = 4000;

impl DefiningDomain {
    pub fn reinhardt(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() || exponents.contains(&0) {
            return Err(Error::Config(format!(
                "exponents must be positive, got {exponents:?}"
            )));
        }
        let mut domain = DefiningDomain {
            exponents,
            constants: LeviConstants {
                delta: COLLAR_DELTA,
                gamma: 0.0,
                kappa: 0.0,
                k_bound: 0.0,
            },
        };
        domain.constants = domain.estimate_constants(
            &Region::Collar {
                delta: COLLAR_DELTA,
            },
            CONSTANT_SAMPLES,
            0x5eed,
        );
        Ok(domain)
    }

    pub fn ball(n: usize) -> Self {
        Self::reinhardt(vec![1; n]).expect("ball exponents are valid")
    }

    /// `|z1|^2 + |z2|^(2m) < 1`.
    pub fn egg(m: u32) -> Result<Self> {
        Self::reinhardt(vec![1, m])
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Largest exponent: the boundary is at worst `2m`-th order flat along
    /// complex tangents.
    pub fn type_order(&self) -> u32 {
        *self.exponents.iter().max().unwrap()
    }

    pub fn is_ball(&self) -> bool {
        self.exponents.iter().all(|&m| m == 1)
    }

    pub fn is_convex(&self) -> bool {
        true
    }

    /// Constants over the collar `|rho| < 0.1`.
    pub fn constants(&self) -> &LeviConstants {
        &self.constants
    }

    pub fn rho(&self, z: &[Complex64]) -> f64 {
        self.exponents
            .iter()
            .zip(z)
            .map(|(&m, zj)| zj.norm_sqr().powi(m as i32))
            .sum::<f64>()
            - 1.0
    }

    /// `rho(z + v) - rho(z)`, evaluated without cancellation against the
    /// constant term so that small increments keep full relative accuracy.
    pub fn rho_increment(&self, z: &[Complex64], v: &[Complex64]) -> f64 {
        self.exponents
            .iter()
            .zip(z.iter().zip(v))
            .map(|(&m, (z, v))| {
                let b = z.norm_sqr();
                let a = (z + v).norm_sqr();
                // a - b without cancellation
                let diff = 2.0 * (z.conj() * v).re + v.norm_sqr();
                // a^m - b^m = (a - b) sum_i a^i b^(m-1-i)
                let s: f64 = (0..m as i32).map(|i| a.powi(i) * b.powi(m as i32 - 1 - i)).sum();
                diff * s
            })
            .sum()
    }

    /// `d rho / d z_j`.
    pub fn d_rho(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.exponents
            .iter()
            .zip(z)
            .map(|(&m, zj)| m as f64 * zj.norm_sqr().powi(m as i32 - 1) * zj.conj())
            .collect()
    }

    /// `d^2 rho / d z_j d z_k` (diagonal for this family).
    pub fn holo_hessian(&self, z: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut h = vec![Complex64::new(0.0, 0.0); n * n];
        for (j, (&m, zj)) in self.exponents.iter().zip(z).enumerate() {
            if m >= 2 {
                let m = m as f64;
                h[j * n + j] = m * (m - 1.0) * zj.norm_sqr().powi(m as i32 - 2) * zj.conj() * zj.conj();
            }
        }
        h
    }

    /// `d^2 rho / d z_j d conj(z_k)` (diagonal for this family).
    pub fn mixed_hessian(&self, z: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut h = vec![Complex64::new(0.0, 0.0); n * n];
        for (j, (&m, zj)) in self.exponents.iter().zip(z).enumerate() {
            h[j * n + j] = Complex64::new((m * m) as f64 * zj.norm_sqr().powi(m as i32 - 1), 0.0);
        }
        h
    }

    /// Euclidean length of the real gradient, `2 |d rho|`.
    pub fn gradient_norm(&self, z: &[Complex64]) -> f64 {
        2.0 * norm(&self.d_rho(z))
    }

    /// Smallest eigenvalue of the mixed Hessian.
    pub fn levi_floor(&self, z: &[Complex64]) -> f64 {
        let n = self.dim();
        let h = self.mixed_hessian(z);
        (0..n).map(|j| h[j * n + j].re).fold(f64::INFINITY, f64::min)
    }

    /// Sum over multi-indices `|alpha| + |beta| <= 3` of the sup norms of
    /// `d^alpha dbar^beta rho`, taken over the given points. Mixed
    /// derivatives in distinct coordinates vanish for this family.
    fn derivative_bound(&self, points: &[Vec<Complex64>]) -> f64 {
        let rho_sup = points.iter().map(|z| self.rho(z).abs()).fold(0.0, f64::max);
        let mut total = rho_sup;
        for (j, &m) in self.exponents.iter().enumerate() {
            let r_max = points.iter().map(|z| z[j].norm()).fold(0.0, f64::max);
            let m = m as i32;
            for a in 0..=3i32 {
                for b in 0..=(3 - a) {
                    if a + b == 0 || a > m || b > m {
                        continue;
                    }
                    let coef = falling(m, a) * falling(m, b);
                    total += coef * r_max.powi(2 * m - a - b);
                }
            }
        }
        total
    }

    /// Monte Carlo estimate of the constants over `region`.
    pub fn estimate_constants(&self, region: &Region, samples: usize, seed: u64) -> LeviConstants {
        let points = self.sample_region(region, samples, seed);
        let gamma = points.iter().map(|z| self.levi_floor(z)).fold(f64::INFINITY, f64::min);
        let kappa = points
            .iter()
            .map(|z| self.gradient_norm(z))
            .fold(f64::INFINITY, f64::min);
        let delta = match region {
            Region::Collar { delta } => *delta,
            Region::Near { .. } => points.iter().map(|z| self.rho(z).abs()).fold(0.0, f64::max),
        };
        LeviConstants {
            delta,
            gamma,
            kappa,
            k_bound: self.derivative_bound(&points),
        }
    }

    fn sample_region(&self, region: &Region, samples: usize, seed: u64) -> Vec<Vec<Complex64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.dim();
        let mut out = Vec::with_capacity(samples);
        match region {
            Region::Collar { delta } => {
                while out.len() < samples {
                    let z: Vec<Complex64> = (0..n)
                        .map(|_| {
                            Complex64::new(
                                rng.random_range(-1.3..1.3),
                                rng.random_range(-1.3..1.3),
                            )
                        })
                        .collect();
                    if self.rho(&z).abs() < *delta {
                        out.push(z);
                    }
                }
            }
            Region::Near { center, radius } => {
                while out.len() < samples {
                    let d = random_unit_vector(&mut rng, n);
                    let r = radius * rng.random::<f64>().powf(1.0 / (2 * n) as f64);
                    out.push(center.iter().zip(&d).map(|(c, d)| c + r * d).collect());
                }
            }
        }
        out
    }

    /// The boundary point `s * direction`, `s > 0`.
    pub fn radial_boundary_point(&self, direction: &[Complex64]) -> Vec<Complex64> {
        // rho(s d) + 1 is increasing in s
        let f = |s: f64| -> f64 {
            self.exponents
                .iter()
                .zip(direction)
                .map(|(&m, d)| (s * s * d.norm_sqr()).powi(m as i32))
                .sum::<f64>()
                - 1.0
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        while f(hi) < 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-17 {
                break;
            }
        }
        let s = 0.5 * (lo + hi);
        direction.iter().map(|d| s * d).collect()
    }

    pub fn random_boundary_point(&self, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        let d = random_unit_vector(rng, self.dim());
        self.radial_boundary_point(&d)
    }

    /// Orthonormal basis of the complex tangent space
    /// `{tau : sum_j d rho / d z_j (P) tau_j = 0}` at a boundary point.
    pub fn complex_tangent_basis(&self, p: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        let r = self.rho(p);
        if r.abs() >= 1e-10 {
            return Err(Error::OffBoundary(r.abs()));
        }
        let grad = self.gradient_norm(p);
        if grad < 0.5 * self.constants.kappa {
            return Err(Error::DegenerateGradient {
                norm: grad,
                floor: 0.5 * self.constants.kappa,
            });
        }
        let n = self.dim();
        // tau is orthogonal (hermitian) to conj(d rho)
        let g = self.d_rho(p);
        let gn = norm(&g);
        let v: Vec<Complex64> = g.iter().map(|x| x.conj() / gn).collect();
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n - 1);
        for e in 0..n {
            let mut w = vec![Complex64::new(0.0, 0.0); n];
            w[e] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for q in std::iter::once(&v).chain(basis.iter()) {
                    let ip: Complex64 = w.iter().zip(q.iter()).map(|(a, b)| a * b.conj()).sum();
                    for (wi, qi) in w.iter_mut().zip(q.iter()) {
                        *wi -= ip * qi;
                    }
                }
            }
            let nw = norm(&w);
            if nw > 1e-8 {
                basis.push(w.iter().map(|x| x / nw).collect());
            }
            if basis.len() == n - 1 {
                break;
            }
        }
        Ok(basis)
    }

    /// Euclidean distance from `z` to the boundary.
    pub fn distance_to_boundary(&self, z: &[Complex64]) -> Result<f64> {
        if self.is_ball() {
            return Ok((1.0 - norm(z)).abs());
        }
        if self.dim() != 2 {
            return Err(Error::Unsupported(
                "boundary distance for non-ball domains is implemented in C^2 only".into(),
            ));
        }
        // Nearest points of a Reinhardt boundary share the phases of z, so
        // this reduces to the planar profile x^(2 m1) + y^(2 m2) = 1.
        let (r1, r2) = (z[0].norm(), z[1].norm());
        let (m1, m2) = (self.exponents[0] as f64, self.exponents[1] as f64);
        let d2 = |th: f64| -> f64 {
            let x = th.cos().max(0.0).powf(1.0 / m1);
            let y = th.sin().max(0.0).powf(1.0 / m2);
            (x - r1).powi(2) + (y - r2).powi(2)
        };
        let half_pi = std::f64::consts::FRAC_PI_2;
        let samples = 1024;
        let (mut best, mut best_val) = (0usize, f64::INFINITY);
        for k in 0..=samples {
            let v = d2(half_pi * k as f64 / samples as f64);
            if v < best_val {
                best = k;
                best_val = v;
            }
        }
        let step = half_pi / samples as f64;
        let mut lo = (best as f64 - 1.0).max(0.0) * step;
        let mut hi = ((best as f64 + 1.0) * step).min(half_pi);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let a = hi - phi * (hi - lo);
            let b = lo + phi * (hi - lo);
            if d2(a) < d2(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        Ok(d2(0.5 * (lo + hi)).min(best_val).sqrt())
    }
}

fn falling(m: i32, a: i32) -> f64 {
    (0..a).map(|i| (m - i) as f64).product()
}

pub(crate) fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let r = norm(&v);
        if r > 1e-3 && r <= 1.0 {
            return v.iter().map(|x| x / r).collect();
        }
    }
}

/// A uniformly random point of the open ball of radius `radius` about `center`.
pub(crate) fn random_point_in_ball(
    rng: &mut ChaCha8Rng,
    center: &[Complex64],
    radius: f64,
) -> Vec<Complex64> {
    let n = center.len();
    let d = random_unit_vector(rng, n);
    let r = radius * rng.random::<f64>().powf(1.0 / (2 * n) as f64);
    center.iter().zip(&d).map(|(c, d)| c + r * d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sign_convention_of_rho() {
        let egg = DefiningDomain::egg(2).unwrap();
        assert!(egg.rho(&[c(0.2, 0.1), c(0.3, 0.0)]) < 0.0);
        assert_abs_diff_eq!(egg.rho(&[c(1.0, 0.0), c(0.0, 0.0)]), 0.0);
        assert!(egg.rho(&[c(1.0, 0.0), c(0.5, 0.0)]) > 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let egg = DefiningDomain::egg(2).unwrap();
        let z = vec![c(0.3, -0.2), c(0.5, 0.4)];
        let h = 1e-6;
        let g = egg.d_rho(&z);
        for j in 0..2 {
            let mut zx = z.clone();
            zx[j] += h;
            let mut zmx = z.clone();
            zmx[j] -= h;
            let mut zy = z.clone();
            zy[j] += c(0.0, h);
            let mut zmy = z.clone();
            zmy[j] -= c(0.0, h);
            let dx = (egg.rho(&zx) - egg.rho(&zmx)) / (2.0 * h);
            let dy = (egg.rho(&zy) - egg.rho(&zmy)) / (2.0 * h);
            let wirtinger = 0.5 * c(dx, -dy);
            assert!((wirtinger - g[j]).norm() < 1e-8);
        }
    }

    #[test]
    fn ball_constants() {
        let ball = DefiningDomain::ball(2);
        let k = ball.constants();
        assert_abs_diff_eq!(k.gamma, 1.0);
        assert!(k.kappa > 1.8 && k.kappa < 2.0);
        assert!(k.k_bound > 6.0);
    }

    #[test]
    fn egg_is_weakly_pseudoconvex_on_the_collar() {
        let egg = DefiningDomain::egg(2).unwrap();
        assert!(egg.constants().gamma < 1e-2);
        let near = egg.estimate_constants(
            &Region::Near {
                center: CnPoint(vec![c(0.0, 0.0), c(1.0, 0.0)]),
                radius: 0.3,
            },
            2000,
            1,
        );
        assert!(near.gamma > 0.9);
    }

    #[test]
    fn tangent_basis_examples() {
        let ball = DefiningDomain::ball(2);
        let t = ball.complex_tangent_basis(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t[0][0]).norm() < 1e-15 && (t[0][1] - c(1.0, 0.0)).norm() < 1e-15);
        let t = ball.complex_tangent_basis(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((t[0][0] - c(1.0, 0.0)).norm() < 1e-15 && t[0][1].norm() < 1e-15);
        let egg = DefiningDomain::egg(2).unwrap();
        let t = egg.complex_tangent_basis(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((t[0][1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tangent_basis_rejects_interior_points() {
        let ball = DefiningDomain::ball(2);
        assert!(matches!(
            ball.complex_tangent_basis(&[c(0.5, 0.0), c(0.0, 0.0)]),
            Err(Error::OffBoundary(_))
        ));
    }

    #[test]
    fn tangent_basis_is_orthonormal_and_tangent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for domain in [DefiningDomain::ball(3), DefiningDomain::egg(2).unwrap()] {
            for _ in 0..200 {
                let p = domain.random_boundary_point(&mut rng);
                let basis = domain.complex_tangent_basis(&p).unwrap();
                assert_eq!(basis.len(), domain.dim() - 1);
                let g = domain.d_rho(&p);
                for (a, ta) in basis.iter().enumerate() {
                    let s: Complex64 = g.iter().zip(ta).map(|(g, t)| g * t).sum();
                    assert!(s.norm() < 1e-12);
                    for (b, tb) in basis.iter().enumerate() {
                        let ip: Complex64 = ta.iter().zip(tb).map(|(x, y)| x * y.conj()).sum();
                        let expect = if a == b { 1.0 } else { 0.0 };
                        assert!((ip - expect).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_distance() {
        let ball = DefiningDomain::ball(2);
        assert_abs_diff_eq!(ball.distance_to_boundary(&[c(0.3, 0.0), c(0.0, 0.4)]).unwrap(), 0.5, epsilon = 1e-15);
        let egg = DefiningDomain::egg(2).unwrap();
        // along the z1 axis the nearest boundary point is (1, 0)
        assert_abs_diff_eq!(egg.distance_to_boundary(&[c(0.9, 0.0), c(0.0, 0.0)]).unwrap(), 0.1, epsilon = 1e-10);
        // brute-force check against boundary samples
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let z = [c(0.1, 0.5), c(-0.4, 0.3)];
        let d = egg.distance_to_boundary(&z).unwrap();
        let mut brute = f64::INFINITY;
        for _ in 0..200_000 {
            let b = egg.random_boundary_point(&mut rng);
            brute = brute.min(dist(&b, &z));
        }
        assert!(d <= brute + 1e-12);
        assert!(brute - d < 2e-3);
    }
}
