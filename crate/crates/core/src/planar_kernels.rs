//! One-variable kernels: Cauchy and Cauchy-Pompeiu reproduction, the Stokes
//! identity, orthonormal bases of Bergman and Hardy spaces and the closed
//! forms on the unit disc.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{area_integrate, trapezoid_integrate, AreaQuadrature, PlanarContour, DEFAULT_RADIAL_ORDER};
use crate::quadrature::gauss_legendre_unit;

/// Interior evaluation points must stay this fraction of the diameter away
/// from the boundary.
pub const PLANAR_GUARD_FRACTION: f64 = 1e-3;

/// Largest supported orthonormal basis.
pub const MAX_BASIS: usize = 60;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// `int_a^x f phi' + int_a^x f' phi` by composite Gauss-Legendre. For an
/// admissible weight (`phi(a) = 0`, `phi(x) = 1`) this equals `f(x)`.
pub fn ftc_reproduce<F, DF, P, DP>(f: F, df: DF, phi: P, dphi: DP, a: f64, x: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    DF: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
    DP: Fn(f64) -> f64,
{
    if phi(a).abs() > 1e-12 || (phi(x) - 1.0).abs() > 1e-12 {
        return Err(Error::BoundaryCondition(format!(
            "phi(a) = {}, phi(x) = {}",
            phi(a),
            phi(x)
        )));
    }
    let panels = 32;
    let (nodes, weights) = gauss_legendre_unit(16);
    let h = (x - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let left = a + p as f64 * h;
        for (s, w) in nodes.iter().zip(&weights) {
            let t = left + s * h;
            total += w * h * (f(t) * dphi(t) + df(t) * phi(t));
        }
    }
    Ok(total)
}

/// `int_{bd} alpha dz - iint (d alpha / d zbar) dzbar ^ dz`, which vanishes by
/// Stokes's theorem. Uses `dzbar ^ dz = 2i dA`.
pub fn stokes_residual<A, D>(contour: &PlanarContour, alpha: A, dbar_alpha: D) -> Result<Complex64>
where
    A: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    let samples: Vec<Complex64> = contour
        .points()
        .iter()
        .zip(contour.derivatives())
        .map(|(&z, dz)| alpha(z) * dz)
        .collect();
    let boundary = trapezoid_integrate(contour, &samples)?;
    let area = area_integrate(contour, dbar_alpha, None)?;
    Ok(boundary - Complex64::new(0.0, 2.0) * area)
}

fn check_guard(contour: &PlanarContour, z: Complex64) -> Result<()> {
    let guard = PLANAR_GUARD_FRACTION * contour.diameter();
    let d = contour.distance_to_nodes(z);
    if d < guard {
        return Err(Error::GuardViolation { distance: d, guard });
    }
    Ok(())
}

/// `(1 / 2 pi i) int f(zeta) / (zeta - z) dzeta` from boundary samples of `f`.
///
/// At an exterior point the integral vanishes by Cauchy's theorem; a
/// nonzero value there means the samples are not the trace of a holomorphic
/// function or the contour is misoriented, and is reported as an error.
pub fn cauchy_reproduce(contour: &PlanarContour, f: &[Complex64], z: Complex64) -> Result<Complex64> {
    if f.len() != contour.len() {
        return Err(Error::NodeCountMismatch {
            expected: contour.len(),
            got: f.len(),
        });
    }
    check_guard(contour, z)?;
    let samples: Vec<Complex64> = f
        .iter()
        .zip(contour.points())
        .zip(contour.derivatives())
        .map(|((fv, &g), dg)| fv * dg / (g - z))
        .collect();
    let value = trapezoid_integrate(contour, &samples)? / TWO_PI_I;
    let winding = contour.winding_number(z);
    if winding.abs() < 0.5 {
        let scale = f.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if value.norm() > 1e-8 * scale {
            return Err(Error::Orientation(winding));
        }
    }
    Ok(value)
}

/// The two terms of the Cauchy-Pompeiu formula and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyPompeiu {
    /// `(1 / 2 pi i) int f / (zeta - z) dzeta`.
    pub boundary: Complex64,
    /// `(1 / 2 pi i) iint (df / dzetabar) / (zeta - z) dzetabar ^ dzeta`.
    pub area: Complex64,
    /// `boundary - area`, which equals `f(z)`.
    pub value: Complex64,
}

pub fn cauchy_pompeiu<F, D>(contour: &PlanarContour, f: F, dbar_f: D, z: Complex64) -> Result<CauchyPompeiu>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    check_guard(contour, z)?;
    if contour.winding_number(z) < 0.5 {
        return Err(Error::OutsideDomain(format!("{z}")));
    }
    let samples: Vec<Complex64> = contour
        .points()
        .iter()
        .zip(contour.derivatives())
        .map(|(&g, dg)| f(g) * dg / (g - z))
        .collect();
    let boundary = trapezoid_integrate(contour, &samples)? / TWO_PI_I;
    let integral = area_integrate(contour, |zeta| dbar_f(zeta) / (zeta - z), Some(z))?;
    let area = Complex64::new(0.0, 2.0) * integral / TWO_PI_I;
    Ok(CauchyPompeiu {
        boundary,
        area,
        value: boundary - area,
    })
}

/// Bergman kernel of the unit disc, `1 / (pi (1 - z conj(zeta))^2)`.
pub fn bergman_disc(z: Complex64, zeta: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 || zeta.norm() >= 1.0 {
        return Err(Error::OutsideDomain(format!("({z}, {zeta})")));
    }
    let d = 1.0 - z * zeta.conj();
    Ok(1.0 / (PI * d * d))
}

/// Szego kernel of the unit disc, `1 / (2 pi (1 - z conj(zeta)))`.
pub fn szego_disc(z: Complex64, zeta: Complex64) -> Result<Complex64> {
    if z.norm() > 1.0 || zeta.norm() > 1.0 {
        return Err(Error::OutsideDomain(format!("({z}, {zeta})")));
    }
    let d = 1.0 - z * zeta.conj();
    if d.norm() < 1e-14 {
        return Err(Error::Singular);
    }
    Ok(1.0 / (2.0 * PI * d))
}

/// Which Hilbert space of holomorphic functions a basis spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// Area measure: the Bergman space A^2.
    Bergman,
    /// Arclength measure on the boundary: the Hardy space H^2.
    Hardy,
}

/// Orthonormalized monomials `phi_j(z) = sum_{i <= j} C[i, j] z^i`.
#[derive(Debug, Clone)]
pub struct HoloBasis {
    space: Space,
    coefficients: DMatrix<Complex64>,
    monomial_norms: Vec<f64>,
}

/// Nodes and weights realizing the inner product of `space`.
fn inner_product_rule(contour: &PlanarContour, space: Space) -> Result<(Vec<Complex64>, Vec<f64>)> {
    match space {
        Space::Bergman => {
            let rule = AreaQuadrature::star_chart(contour, contour.interior_point(), DEFAULT_RADIAL_ORDER)?;
            Ok((rule.points, rule.weights))
        }
        Space::Hardy => Ok((contour.points().to_vec(), contour.arclength_weights())),
    }
}

/// Gram-Schmidt of `1, z, ..., z^(n-1)` with one re-orthogonalization pass.
pub fn build_onb(contour: &PlanarContour, n: usize, space: Space) -> Result<HoloBasis> {
    if n > MAX_BASIS {
        return Err(Error::BasisTooLarge {
            requested: n,
            max: MAX_BASIS,
        });
    }
    if n == 0 {
        return Err(Error::BasisTooLarge { requested: 0, max: MAX_BASIS });
    }
    let (points, weights) = inner_product_rule(contour, space)?;
    let m = points.len();
    // columns: sqrt(w) z^i sampled at the nodes
    let mut samples = DMatrix::<Complex64>::zeros(m, n);
    for (r, (z, w)) in points.iter().zip(&weights).enumerate() {
        let mut p = Complex64::new(w.sqrt(), 0.0);
        for i in 0..n {
            samples[(r, i)] = p;
            p *= z;
        }
    }
    let gram = samples.adjoint() * &samples;
    let monomial_norms: Vec<f64> = (0..n).map(|i| gram[(i, i)].re.sqrt()).collect();
    // conditioning of the monomials up to scaling
    let scaled = DMatrix::from_fn(n, n, |i, j| gram[(i, j)] / (monomial_norms[i] * monomial_norms[j]));
    let eig = SymmetricEigen::new(scaled).eigenvalues;
    let lo = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().cloned().fold(0.0, f64::max);
    let cond = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if cond > 1e12 {
        return Err(Error::IllConditionedGram(cond));
    }

    let mut q = samples.clone();
    let mut coefficients = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        coefficients[(j, j)] = Complex64::new(1.0, 0.0);
        for _pass in 0..2 {
            for k in 0..j {
                let proj = q.column(k).dotc(&q.column(j));
                let qk = q.column(k).clone_owned();
                q.column_mut(j).axpy(-proj, &qk, Complex64::new(1.0, 0.0));
                let ck = coefficients.column(k).clone_owned();
                coefficients.column_mut(j).axpy(-proj, &ck, Complex64::new(1.0, 0.0));
            }
        }
        let norm = q.column(j).norm();
        q.column_mut(j).unscale_mut(norm);
        coefficients.column_mut(j).unscale_mut(norm);
    }
    Ok(HoloBasis {
        space,
        coefficients,
        monomial_norms,
    })
}

impl HoloBasis {
    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        self.coefficients.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Upper triangular with positive real diagonal.
    pub fn coefficients(&self) -> &DMatrix<Complex64> {
        &self.coefficients
    }

    /// Norms of the raw monomials `z^j` in the chosen inner product.
    pub fn monomial_norms(&self) -> &[f64] {
        &self.monomial_norms
    }

    /// Diagonal of the coefficient matrix: the leading coefficient of each
    /// basis function.
    pub fn normalization_constants(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.coefficients[(j, j)].re).collect()
    }

    /// Values `phi_0(z), ..., phi_{N-1}(z)`.
    pub fn eval_all(&self, z: Complex64) -> Vec<Complex64> {
        let n = self.len();
        let mut powers = Vec::with_capacity(n);
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            powers.push(p);
            p *= z;
        }
        (0..n)
            .map(|j| (0..=j).map(|i| self.coefficients[(i, j)] * powers[i]).sum())
            .collect()
    }

    pub fn eval(&self, j: usize, z: Complex64) -> Complex64 {
        self.eval_all(z)[j]
    }

    /// Gram matrix of the basis under the inner product it was built with.
    pub fn gram(&self, contour: &PlanarContour) -> Result<DMatrix<Complex64>> {
        let (points, weights) = inner_product_rule(contour, self.space)?;
        let n = self.len();
        let mut g = DMatrix::<Complex64>::zeros(n, n);
        for (z, w) in points.iter().zip(&weights) {
            let v = self.eval_all(*z);
            for a in 0..n {
                for b in 0..n {
                    g[(a, b)] += v[a] * v[b].conj() * *w;
                }
            }
        }
        Ok(g)
    }
}

/// Truncated kernel `sum_j phi_j(z) conj(phi_j(zeta))`.
pub fn kernel_sum(basis: &HoloBasis, z: Complex64, zeta: Complex64) -> Complex64 {
    let a = basis.eval_all(z);
    let b = basis.eval_all(zeta);
    a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Curve;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc(n: usize) -> PlanarContour {
        PlanarContour::new(Curve::unit_circle(), n).unwrap()
    }

    #[test]
    fn ftc_examples() {
        let v = ftc_reproduce(|_| 1.0, |_| 0.0, |t| t * t, |t| 2.0 * t, 0.0, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        let v = ftc_reproduce(|t| t * t, |t| 2.0 * t, |t| t, |_| 1.0, 0.0, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        let h = PI / 2.0;
        let v = ftc_reproduce(f64::sin, f64::cos, |t| t / h, |_| 1.0 / h, 0.0, h).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
        assert!(ftc_reproduce(f64::sin, f64::cos, |t| t, |_| 1.0, 0.0, h).is_err());
    }

    #[test]
    fn stokes_examples() {
        let d = disc(128);
        assert!(stokes_residual(&d, |z| z * z, |_| c(0.0, 0.0)).unwrap().norm() < 1e-10);
        assert!(stokes_residual(&d, |z| z.conj(), |_| c(1.0, 0.0)).unwrap().norm() < 1e-8);
        assert!(stokes_residual(&d, |z| c(z.norm_sqr(), 0.0), |z| z).unwrap().norm() < 1e-8);
        // the boundary term alone: int conj(z) dz = 2 pi i
        let s: Vec<_> = d.points().iter().zip(d.derivatives()).map(|(z, dz)| z.conj() * dz).collect();
        assert!((trapezoid_integrate(&d, &s).unwrap() - c(0.0, 2.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn cauchy_examples() {
        let e = PlanarContour::new(Curve::Ellipse { a: 1.5, b: 1.0 }, 256).unwrap();
        let f = e.sample(|z| z.exp());
        let v = cauchy_reproduce(&e, &f, c(0.2, 0.0)).unwrap();
        assert!((v - c(0.2f64.exp(), 0.0)).norm() < 1e-10);
        let ones = vec![c(1.0, 0.0); 256];
        assert!((cauchy_reproduce(&e, &ones, c(0.3, 0.4)).unwrap() - 1.0).norm() < 1e-12);
        assert!(cauchy_reproduce(&e, &f, c(3.0, 0.0)).unwrap().norm() < 1e-10);
        // conj(z) is not a holomorphic trace: outside, the integral is not zero
        let d = disc(64);
        let g = d.sample(|z| z.conj());
        assert!(matches!(cauchy_reproduce(&d, &g, c(0.0, 3.0)), Err(Error::Orientation(_))));
        assert!(matches!(
            cauchy_reproduce(&d, &g, c(1.0, 0.0)),
            Err(Error::GuardViolation { .. })
        ));
    }

    #[test]
    fn pompeiu_examples() {
        let d = disc(256);
        let r = cauchy_pompeiu(&d, |z| z.conj(), |_| c(1.0, 0.0), c(0.3, 0.0)).unwrap();
        assert!(r.boundary.norm() < 1e-12);
        assert!((r.value - 0.3).norm() < 1e-6);
        let r = cauchy_pompeiu(&d, |z| c(z.norm_sqr(), 0.0), |z| z, c(0.4, 0.0)).unwrap();
        assert!((r.value - 0.16).norm() < 1e-6);
        let r = cauchy_pompeiu(&d, |z| z * z * z, |_| c(0.0, 0.0), c(0.1, 0.5)).unwrap();
        assert!(r.area.norm() < 1e-8);
        assert!((r.value - c(0.1, 0.5).powu(3)).norm() < 1e-10);
    }

    #[test]
    fn disc_closed_forms() {
        assert!((bergman_disc(c(0.0, 0.0), c(0.0, 0.0)).unwrap() - 1.0 / PI).norm() < 1e-15);
        assert!((bergman_disc(c(0.5, 0.0), c(0.5, 0.0)).unwrap().re - 0.5658842).abs() < 1e-7);
        let (a, b) = (c(0.3, 0.1), c(-0.2, 0.0));
        assert!((bergman_disc(a, b).unwrap() - bergman_disc(b, a).unwrap().conj()).norm() < 1e-15);
        assert!(bergman_disc(c(1.0, 0.0), c(0.0, 0.0)).is_err());
        assert!((szego_disc(c(0.0, 0.0), c(0.0, 1.0)).unwrap() - 0.5 / PI).norm() < 1e-15);
        assert!((szego_disc(c(0.5, 0.0), c(0.5, 0.0)).unwrap().re - 0.2122066).abs() < 1e-7);
        assert!(matches!(szego_disc(c(1.0, 0.0), c(1.0, 0.0)), Err(Error::Singular)));
    }

    #[test]
    fn szego_integral_reproduces_cubes() {
        let d = disc(64);
        let z = c(0.3, 0.2);
        let w = d.arclength_weights();
        let v: Complex64 = d
            .points()
            .iter()
            .zip(&w)
            .map(|(&zeta, w)| szego_disc(z, zeta).unwrap() * zeta.powu(3) * *w)
            .sum();
        assert!((v - z.powu(3)).norm() < 1e-13);
    }

    #[test]
    fn disc_monomial_norms() {
        let d = disc(128);
        let a = build_onb(&d, 5, Space::Bergman).unwrap();
        for (j, n) in a.monomial_norms().iter().enumerate() {
            assert!((n - (PI / (j as f64 + 1.0)).sqrt()).abs() < 1e-12);
        }
        let h = build_onb(&d, 5, Space::Hardy).unwrap();
        for k in h.normalization_constants() {
            assert!((k - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_basis_is_orthonormal() {
        let e = PlanarContour::new(Curve::Ellipse { a: 1.5, b: 1.0 }, 128).unwrap();
        for space in [Space::Bergman, Space::Hardy] {
            let b = build_onb(&e, 12, space).unwrap();
            let g = b.gram(&e).unwrap();
            let err = (g - DMatrix::<Complex64>::identity(12, 12)).norm();
            assert!(err < 1e-8, "{space:?} {err}");
            for i in 0..12 {
                assert!(b.coefficients()[(i, i)].im == 0.0 && b.coefficients()[(i, i)].re > 0.0);
                for j in 0..i {
                    assert_eq!(b.coefficients()[(i, j)], c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn basis_size_limits() {
        let d = disc(128);
        assert!(matches!(build_onb(&d, 61, Space::Hardy), Err(Error::BasisTooLarge { .. })));
        let e = PlanarContour::new(Curve::Ellipse { a: 3.0, b: 0.5 }, 256).unwrap();
        assert!(matches!(build_onb(&e, 60, Space::Bergman), Err(Error::IllConditionedGram(_))));
    }

    #[test]
    fn kernel_sums_match_closed_forms() {
        let d = disc(256);
        let a = build_onb(&d, 40, Space::Bergman).unwrap();
        let z = c(0.5, 0.0);
        assert!((kernel_sum(&a, z, z) - bergman_disc(z, z).unwrap()).norm() < 1e-8);
        let h = build_onb(&d, 40, Space::Hardy).unwrap();
        let (z, w) = (c(0.4, 0.0), c(0.0, 0.2));
        assert!((kernel_sum(&h, z, w) - szego_disc(z, w).unwrap()).norm() < 1e-8);
    }
}
