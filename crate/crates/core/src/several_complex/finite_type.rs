//! Sampled lower bounds for the finite-type estimates of a convex domain:
//! growth of `rho` along complex tangent lines, and the size of the
//! singular function relative to `dist(z, bd) + |zeta - z|^(2m)`.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::henkin::{g_function, henkin_phi_convex};
use crate::error::{Error, Result};
use crate::geometry::domain::{dist, random_point_in_ball};
use crate::geometry::{CnPoint, DefiningDomain};

/// Radii `0.3 * 2^(-k/2)`, `k = 0..=16`, of the tangent-line sweep.
pub fn sweep_radii() -> Vec<f64> {
    (0..=16).map(|k| 0.3 * 2f64.powf(-(k as f64) / 2.0)).collect()
}

/// Slack on the local growth order before it counts as exceeding `2m`.
const ORDER_SLACK: f64 = 0.5;

/// `(rho(zeta + t tau) - rho(zeta)) / t^(2m)`.
pub fn fiber_ratio(domain: &DefiningDomain, zeta: &[Complex64], tau: &[Complex64], t: f64, m: u32) -> f64 {
    let v: Vec<Complex64> = tau.iter().map(|x| t * x).collect();
    domain.rho_increment(zeta, &v) / t.powi(2 * m as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentMinimum {
    pub value: f64,
    pub zeta: CnPoint,
    pub tau: CnPoint,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMinimum {
    pub value: f64,
    pub z: CnPoint,
    pub zeta: CnPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteTypeReport {
    pub m: u32,
    /// `min |Phi(z, zeta)| / (dist(z, bd) + |zeta - z|^(2m))`.
    pub c_62: PairMinimum,
    /// The same minimum with `g` (gradient at `z`) in place of `Phi`.
    pub c_62_g: PairMinimum,
    /// `min (rho(zeta + t tau) - rho(zeta)) / t^(2m)`.
    pub c_63: TangentMinimum,
    /// Largest local log-log growth order along the sampled tangent lines.
    pub max_order: f64,
    pub samples: usize,
}

/// Boundary points on the coordinate axes, where the tangential flatness of
/// a Reinhardt boundary is worst.
fn axis_points(domain: &DefiningDomain) -> Vec<Vec<Complex64>> {
    let n = domain.dim();
    let mut out = Vec::new();
    for j in 0..n {
        for phase in [0.0, 0.5 * std::f64::consts::PI] {
            let mut d = vec![Complex64::new(0.0, 0.0); n];
            d[j] = Complex64::from_polar(1.0, phase);
            out.push(domain.radial_boundary_point(&d));
        }
    }
    out
}

/// Minimum of the tangent-line ratio over `samples` boundary points and the
/// largest local growth order, estimated from the two smallest radii.
fn tangent_sweep(domain: &DefiningDomain, m: u32, samples: usize, seed: u64) -> Result<(TangentMinimum, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = axis_points(domain);
    while points.len() < samples {
        points.push(domain.random_boundary_point(&mut rng));
    }
    let mut lines = Vec::with_capacity(points.len());
    for zeta in points {
        let basis = domain.complex_tangent_basis(&zeta)?;
        let mut tau = vec![Complex64::new(0.0, 0.0); domain.dim()];
        for b in &basis {
            let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            for (t, x) in tau.iter_mut().zip(b) {
                *t += phase * x;
            }
        }
        let norm = crate::geometry::domain::norm(&tau);
        tau.iter_mut().for_each(|x| *x /= norm);
        lines.push((zeta, tau));
    }
    let radii = sweep_radii();
    let per_line: Vec<(TangentMinimum, f64)> = lines
        .into_par_iter()
        .map(|(zeta, tau)| {
            let mut best = TangentMinimum {
                value: f64::INFINITY,
                zeta: CnPoint(zeta.clone()),
                tau: CnPoint(tau.clone()),
                t: 0.0,
            };
            for &t in &radii {
                let v = fiber_ratio(domain, &zeta, &tau, t, m);
                if v < best.value {
                    best.value = v;
                    best.t = t;
                }
            }
            let (t1, t2) = (radii[radii.len() - 2], radii[radii.len() - 1]);
            let r1 = fiber_ratio(domain, &zeta, &tau, t1, 0);
            let r2 = fiber_ratio(domain, &zeta, &tau, t2, 0);
            let order = if r1 > 0.0 && r2 > 0.0 {
                (r1 / r2).ln() / (t1 / t2).ln()
            } else {
                f64::INFINITY
            };
            (best, order)
        })
        .collect();
    let mut best: Option<TangentMinimum> = None;
    let mut max_order: f64 = 0.0;
    for (b, order) in per_line {
        max_order = max_order.max(order);
        if best.as_ref().is_none_or(|x| b.value < x.value) {
            best = Some(b);
        }
    }
    Ok((best.expect("at least one sample"), max_order))
}

/// Random (interior `z`, boundary `zeta`) pairs: half with `z` anywhere in
/// the domain, half with `z` within 0.3 of `zeta`.
fn sample_pairs(domain: &DefiningDomain, count: usize, seed: u64) -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let zeta = domain.random_boundary_point(&mut rng);
        let z = if out.len() % 2 == 0 {
            let b = domain.random_boundary_point(&mut rng);
            let s: f64 = rng.random_range(0.0..1.0);
            b.iter().map(|x| s * x).collect::<Vec<_>>()
        } else {
            random_point_in_ball(&mut rng, &zeta, 0.3)
        };
        if domain.rho(&z) < -1e-12 {
            out.push((z, zeta));
        }
    }
    out
}

fn pair_minimum<F>(pairs: &[(Vec<Complex64>, Vec<Complex64>, f64)], m: u32, numerator: F) -> Result<PairMinimum>
where
    F: Fn(&[Complex64], &[Complex64]) -> Result<Complex64> + Sync,
{
    let values: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|(z, zeta, d)| {
            let denom = d + dist(zeta, z).powi(2 * m as i32);
            Ok(numerator(z, zeta)?.norm() / denom)
        })
        .collect();
    let mut best = PairMinimum {
        value: f64::INFINITY,
        z: CnPoint(Vec::new()),
        zeta: CnPoint(Vec::new()),
    };
    for (v, (z, zeta, _)) in values.into_iter().zip(pairs) {
        let v = v?;
        if v < best.value {
            best = PairMinimum {
                value: v,
                z: CnPoint(z.clone()),
                zeta: CnPoint(zeta.clone()),
            };
        }
    }
    Ok(best)
}

/// Sampled constants of the finite-type estimates for declared type `m`.
///
/// Fails with [`Error::FiniteTypeMismatch`] when either minimum is not
/// positive or when `rho` grows along some complex tangent line at an order
/// above `2m`, so that the tangential ratio tends to zero at small radii.
pub fn finite_type_bounds(domain: &DefiningDomain, m: u32, samples: usize, seed: u64) -> Result<FiniteTypeReport> {
    if m == 0 || samples == 0 {
        return Err(Error::Config("type and sample count must be positive".into()));
    }
    let (c_63, max_order) = tangent_sweep(domain, m, samples, seed)?;
    let pairs: Vec<(Vec<Complex64>, Vec<Complex64>, f64)> = sample_pairs(domain, samples, seed ^ 0x9e37)
        .into_par_iter()
        .map(|(z, zeta)| {
            let d = domain.distance_to_boundary(&z)?;
            Ok((z, zeta, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let c_62 = pair_minimum(&pairs, m, |z, zeta| henkin_phi_convex(domain, z, zeta))?;
    let c_62_g = pair_minimum(&pairs, m, |z, zeta| Ok(g_function(domain, z, zeta)))?;
    let report = FiniteTypeReport {
        m,
        c_62,
        c_62_g,
        c_63,
        max_order,
        samples,
    };
    if !(report.c_63.value > 0.0) {
        return Err(Error::FiniteTypeMismatch(format!(
            "tangential ratio reaches {:.3e} at t = {:.3e}",
            report.c_63.value, report.c_63.t
        )));
    }
    if max_order > 2.0 * m as f64 + ORDER_SLACK {
        return Err(Error::FiniteTypeMismatch(format!(
            "rho grows at order {max_order:.3} along a complex tangent line, above 2m = {}; the ratio tends to zero (minimum {:.3e} at t = {:.3e})",
            2 * m,
            report.c_63.value,
            report.c_63.t
        )));
    }
    if !(report.c_62.value > 0.0) {
        return Err(Error::FiniteTypeMismatch(format!(
            "singular function ratio reaches {:.3e}",
            report.c_62.value
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn degenerate_fiber_of_the_egg() {
        let egg = DefiningDomain::egg(2).unwrap();
        let zeta = [c(1.0, 0.0), c(0.0, 0.0)];
        let tau = [c(0.0, 0.0), c(0.0, 1.0)];
        for t in sweep_radii() {
            assert_eq!(fiber_ratio(&egg, &zeta, &tau, t, 2), 1.0);
        }
    }

    #[test]
    fn egg_with_correct_type() {
        let egg = DefiningDomain::egg(2).unwrap();
        let r = finite_type_bounds(&egg, 2, 2000, 1).unwrap();
        assert!(r.c_63.value > 0.0 && r.c_63.value <= 1.0 + 1e-12);
        assert!(r.c_62.value > 0.0);
        assert!(r.max_order <= 4.5);
    }

    #[test]
    fn egg_with_type_too_small() {
        let egg = DefiningDomain::egg(2).unwrap();
        assert!(matches!(finite_type_bounds(&egg, 1, 500, 1), Err(Error::FiniteTypeMismatch(_))));
    }

    #[test]
    fn ball_is_type_two() {
        let ball = DefiningDomain::ball(2);
        let r = finite_type_bounds(&ball, 1, 1000, 3).unwrap();
        // rho(zeta + t tau) = t^2 exactly for unit complex tangents
        assert!((r.c_63.value - 1.0).abs() < 1e-9);
        assert!(r.c_62.value > 0.0);
    }
}
