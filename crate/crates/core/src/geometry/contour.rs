//! Smooth closed planar contours sampled on a periodic grid, with the
//! trapezoid rule on the boundary and a star-chart product rule on the
//! enclosed region.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre_unit, periodic_nodes};

/// Default number of Gauss-Legendre nodes along each ray of a star chart.
pub const DEFAULT_RADIAL_ORDER: usize = 64;

/// Analytic description of a closed curve `t -> gamma(t)`, `t in [0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Curve {
    Circle { center: Complex64, radius: f64 },
    Ellipse { a: f64, b: f64 },
    /// `(1 + amplitude cos(frequency t)) e^{it}`.
    PerturbedCircle { amplitude: f64, frequency: u32 },
}

impl Curve {
    pub fn unit_circle() -> Self {
        Curve::Circle {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    /// Returns `(gamma, gamma', gamma'')` at parameter `t`.
    pub fn eval(&self, t: f64) -> [Complex64; 3] {
        let e = Complex64::from_polar(1.0, t);
        let i = Complex64::i();
        match *self {
            Curve::Circle { center, radius } => [center + radius * e, i * radius * e, -radius * e],
            Curve::Ellipse { a, b } => {
                let (s, c) = t.sin_cos();
                [
                    Complex64::new(a * c, b * s),
                    Complex64::new(-a * s, b * c),
                    Complex64::new(-a * c, -b * s),
                ]
            }
            Curve::PerturbedCircle {
                amplitude,
                frequency,
            } => {
                let k = frequency as f64;
                let (s, c) = (k * t).sin_cos();
                let r = 1.0 + amplitude * c;
                let dr = -amplitude * k * s;
                let ddr = -amplitude * k * k * c;
                [
                    r * e,
                    (dr + i * r) * e,
                    (ddr + 2.0 * i * dr - r) * e,
                ]
            }
        }
    }

    /// A point the curve winds around once.
    pub fn interior_point(&self) -> Complex64 {
        match *self {
            Curve::Circle { center, .. } => center,
            _ => Complex64::new(0.0, 0.0),
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            Curve::Circle { radius, .. } => radius > 0.0,
            Curve::Ellipse { a, b } => a > 0.0 && b > 0.0,
            Curve::PerturbedCircle { amplitude, .. } => amplitude.abs() < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidContour(format!("bad curve parameters {self:?}")))
        }
    }
}

/// How the periodic nodes are laid out along the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Parametrization {
    /// Equispaced in the curve's own parameter.
    Native,
    /// Equispaced in arclength: `|gamma'|` is constant.
    #[default]
    Arclength,
}

/// A positively oriented smooth closed contour sampled at `N` (even)
/// periodic nodes `t_k = 2 pi k / N`.
#[derive(Debug, Clone)]
pub struct PlanarContour {
    curve: Curve,
    parametrization: Parametrization,
    t: Vec<f64>,
    z: Vec<Complex64>,
    dz: Vec<Complex64>,
    ddz: Vec<Complex64>,
    interior: Complex64,
}

impl PlanarContour {
    /// Samples `curve` equispaced in its native parameter.
    pub fn new(curve: Curve, n: usize) -> Result<Self> {
        Self::with_parametrization(curve, n, Parametrization::Native)
    }

    /// Samples `curve` equispaced in arclength.
    pub fn arclength(curve: Curve, n: usize) -> Result<Self> {
        Self::with_parametrization(curve, n, Parametrization::Arclength)
    }

    pub fn with_parametrization(
        curve: Curve,
        n: usize,
        parametrization: Parametrization,
    ) -> Result<Self> {
        curve.check()?;
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidContour(format!(
                "node count must be even and at least 4, got {n}"
            )));
        }
        let t = periodic_nodes(n);
        let theta = match parametrization {
            Parametrization::Native => t.clone(),
            Parametrization::Arclength => arclength_nodes(&curve, n),
        };
        let mut z = Vec::with_capacity(n);
        let mut dz = Vec::with_capacity(n);
        let mut ddz = Vec::with_capacity(n);
        let sigma = match parametrization {
            Parametrization::Native => 1.0,
            Parametrization::Arclength => curve_length(&curve) / (2.0 * PI),
        };
        for &th in &theta {
            let [g, dg, ddg] = curve.eval(th);
            match parametrization {
                Parametrization::Native => {
                    z.push(g);
                    dz.push(dg);
                    ddz.push(ddg);
                }
                Parametrization::Arclength => {
                    let speed = dg.norm();
                    let dspeed = (dg.conj() * ddg).re / speed;
                    let dth = sigma / speed;
                    let ddth = -sigma * dspeed * dth / (speed * speed);
                    z.push(g);
                    dz.push(dg * dth);
                    ddz.push(ddg * dth * dth + dg * ddth);
                }
            }
        }

        let contour = PlanarContour {
            curve,
            parametrization,
            t,
            z,
            dz,
            ddz,
            interior: curve.interior_point(),
        };
        contour.validate()?;
        Ok(contour)
    }

    fn validate(&self) -> Result<()> {
        let scale = self.z.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let start = self.curve.eval(0.0)[0];
        let end = self.curve.eval(2.0 * PI)[0];
        if (start - end).norm() > 1e-12 * scale {
            return Err(Error::InvalidContour("curve is not closed".into()));
        }
        if let Some(k) = self.dz.iter().position(|d| d.norm() <= 1e-14 * scale) {
            return Err(Error::InvalidContour(format!(
                "vanishing derivative at node {k}"
            )));
        }
        let w = self.winding_number(self.interior);
        // a coarse contour resolves the winding number only approximately
        if (w - 1.0).abs() > 0.5 {
            return Err(Error::Orientation(w));
        }
        Ok(())
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn parametrization(&self) -> Parametrization {
        self.parametrization
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Parameter step `2 pi / N`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn params(&self) -> &[f64] {
        &self.t
    }

    pub fn points(&self) -> &[Complex64] {
        &self.z
    }

    pub fn derivatives(&self) -> &[Complex64] {
        &self.dz
    }

    pub fn second_derivatives(&self) -> &[Complex64] {
        &self.ddz
    }

    pub fn interior_point(&self) -> Complex64 {
        self.interior
    }

    /// Unit tangent `gamma' / |gamma'|` at node `k`.
    pub fn unit_tangent(&self, k: usize) -> Complex64 {
        self.dz[k] / self.dz[k].norm()
    }

    /// Arclength quadrature weights `|gamma'(t_k)| 2 pi / N`.
    pub fn arclength_weights(&self) -> Vec<f64> {
        let h = self.step();
        self.dz.iter().map(|d| d.norm() * h).collect()
    }

    pub fn length(&self) -> f64 {
        self.arclength_weights().iter().sum()
    }

    /// Largest distance between two nodes.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.z.iter().enumerate() {
            for b in &self.z[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Distance from `z` to the nearest node.
    pub fn distance_to_nodes(&self, z: Complex64) -> f64 {
        self.z
            .iter()
            .map(|p| (p - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `(1 / 2 pi i) * contour integral of dzeta / (zeta - z)`.
    pub fn winding_number(&self, z: Complex64) -> f64 {
        let h = self.step();
        let s: Complex64 = self
            .z
            .iter()
            .zip(&self.dz)
            .map(|(g, dg)| dg / (g - z))
            .sum::<Complex64>()
            * h;
        (s / (2.0 * PI * Complex64::i())).re
    }

    /// Samples `f` at the nodes.
    pub fn sample<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Vec<Complex64> {
        self.z.iter().map(|&z| f(z)).collect()
    }

    /// Resamples the same curve with a different node count.
    pub fn resampled(&self, n: usize) -> Result<Self> {
        Self::with_parametrization(self.curve, n, self.parametrization)
    }
}

/// `sum_k integrand(t_k) * 2 pi / N`: the periodic trapezoid rule in the
/// contour parameter.
pub fn trapezoid_integrate(contour: &PlanarContour, integrand: &[Complex64]) -> Result<Complex64> {
    if integrand.len() != contour.len() {
        return Err(Error::NodeCountMismatch {
            expected: contour.len(),
            got: integrand.len(),
        });
    }
    Ok(integrand.iter().sum::<Complex64>() * contour.step())
}

/// Nodes and weights of a product rule over the region enclosed by a contour.
#[derive(Debug, Clone)]
pub struct AreaQuadrature {
    pub points: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub center: Complex64,
}

impl AreaQuadrature {
    /// Star chart `(s, t) -> c + s (gamma(t) - c)` with Gauss-Legendre in `s`
    /// and the trapezoid rule in `t`. The area element is
    /// `s Im(conj(gamma - c) gamma') ds dt`, which cancels a `1/|zeta - c|`
    /// singularity at the center.
    pub fn star_chart(contour: &PlanarContour, center: Complex64, radial_order: usize) -> Result<Self> {
        let h = contour.step();
        let jac: Vec<f64> = contour
            .points()
            .iter()
            .zip(contour.derivatives())
            .map(|(g, dg)| ((g - center).conj() * dg).im)
            .collect();
        let scale = contour.diameter().powi(2);
        if jac.iter().any(|&j| j <= 1e-14 * scale) {
            return Err(Error::NotStarShaped(format!("{center}")));
        }
        let (s_nodes, s_weights) = gauss_legendre_unit(radial_order);
        let mut points = Vec::with_capacity(s_nodes.len() * contour.len());
        let mut weights = Vec::with_capacity(points.capacity());
        for (k, g) in contour.points().iter().enumerate() {
            for (s, ws) in s_nodes.iter().zip(&s_weights) {
                points.push(center + *s * (g - center));
                weights.push(ws * s * jac[k] * h);
            }
        }
        Ok(AreaQuadrature {
            points,
            weights,
            center,
        })
    }

    pub fn integrate<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| f(z) * w)
            .sum()
    }
}

/// Area integral over the region bounded by `contour`. When `singular_at`
/// is given the star chart is centered there, so integrands with a
/// `1/|zeta - z|` singularity converge at the regular rate.
pub fn area_integrate<F: Fn(Complex64) -> Complex64>(
    contour: &PlanarContour,
    integrand: F,
    singular_at: Option<Complex64>,
) -> Result<Complex64> {
    area_integrate_with_order(contour, integrand, singular_at, DEFAULT_RADIAL_ORDER)
}

pub fn area_integrate_with_order<F: Fn(Complex64) -> Complex64>(
    contour: &PlanarContour,
    integrand: F,
    singular_at: Option<Complex64>,
    radial_order: usize,
) -> Result<Complex64> {
    let center = singular_at.unwrap_or(contour.interior_point());
    let rule = AreaQuadrature::star_chart(contour, center, radial_order)?;
    Ok(rule.integrate(integrand))
}

/// Fourier coefficients of the speed `|gamma'(t)|`, trimmed to the modes
/// that matter at double precision.
fn speed_series(curve: &Curve) -> (f64, Vec<(f64, Complex64)>) {
    let m = 4096;
    let mut buf: Vec<Complex64> = periodic_nodes(m)
        .iter()
        .map(|&t| Complex64::new(curve.eval(t)[1].norm(), 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let c0 = buf[0].re / m as f64;
    let modes = buf
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(j, c)| {
            let k = if j < m / 2 { j as f64 } else { j as f64 - m as f64 };
            let c = c / m as f64;
            (c.norm() > 1e-18 * c0 && j != m / 2).then_some((k, c))
        })
        .collect();
    (c0, modes)
}

fn curve_length(curve: &Curve) -> f64 {
    2.0 * PI * speed_series(curve).0
}

/// Native parameters `theta_k` at which the arclength is `L k / N`.
fn arclength_nodes(curve: &Curve, n: usize) -> Vec<f64> {
    let (c0, modes) = speed_series(curve);
    let arc = |th: f64| -> f64 {
        let mut s = c0 * th;
        for &(k, c) in &modes {
            let e = Complex64::from_polar(1.0, k * th) - 1.0;
            s += (c * e / Complex64::new(0.0, k)).re;
        }
        s
    };
    periodic_nodes(n)
        .into_iter()
        .map(|t| {
            let target = c0 * t;
            let mut th = t;
            for _ in 0..50 {
                let step = (arc(th) - target) / curve.eval(th)[1].norm();
                th -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            th
        })
        .collect()
}
