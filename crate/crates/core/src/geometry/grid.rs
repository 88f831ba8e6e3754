//! Quadrature grids on boundary hypersurfaces in C^n.
//!
//! A grid stores, at every node, the boundary point, the `2n - 1` tangent
//! vectors `d zeta / d u_i` of the parametrization and a product quadrature
//! weight. The tangents are ordered so that (outward normal, t_1, ...,
//! t_{2n-1}) is a positively oriented real frame of `R^{2n}` with coordinates
//! `(x_1, y_1, ..., x_n, y_n)`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::contour::PlanarContour;
use super::domain::{norm, DefiningDomain};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre_unit, periodic_nodes};

#[derive(Debug, Clone)]
pub struct HypersurfaceGrid {
    dim: usize,
    points: Vec<Complex64>,
    tangents: Vec<Complex64>,
    normals: Vec<Complex64>,
    weights: Vec<f64>,
}

/// Real coordinates `(x_1, y_1, ..., x_n, y_n)` of a complex vector.
pub fn realify(v: &[Complex64]) -> Vec<f64> {
    v.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Determinant of the real `2n x 2n` matrix whose columns are the given
/// complex vectors written in real coordinates.
pub fn real_determinant(columns: &[&[Complex64]]) -> f64 {
    let m = columns.len();
    let cols: Vec<Vec<f64>> = columns.iter().map(|c| realify(c)).collect();
    DMatrix::from_fn(m, m, |r, c| cols[c][r]).determinant()
}

impl HypersurfaceGrid {
    fn from_parts(
        dim: usize,
        points: Vec<Complex64>,
        tangents: Vec<Complex64>,
        normals: Vec<Complex64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let mut grid = HypersurfaceGrid {
            dim,
            points,
            tangents,
            normals,
            weights,
        };
        grid.fix_orientation()?;
        Ok(grid)
    }

    /// The planar contour as a grid in C^1.
    pub fn from_contour(contour: &PlanarContour) -> Result<Self> {
        let h = contour.step();
        let points = contour.points().to_vec();
        let tangents = contour.derivatives().to_vec();
        let normals = tangents
            .iter()
            .map(|t| -Complex64::i() * t / t.norm())
            .collect();
        Self::from_parts(1, points, tangents, normals, vec![h; contour.len()])
    }

    /// The unit circle with `n` nodes.
    pub fn circle(n: usize) -> Result<Self> {
        Self::from_contour(&PlanarContour::new(super::contour::Curve::unit_circle(), n)?)
    }

    /// Boundary of a Reinhardt domain in C^2 in Hopf-type coordinates
    /// `(u, phi_1, phi_2)`: Gauss-Legendre of order `radial` in `u` and
    /// `angular` trapezoid nodes in each angle.
    pub fn reinhardt(domain: &DefiningDomain, radial: usize, angular: usize) -> Result<Self> {
        if domain.dim() != 2 {
            return Err(Error::Unsupported(format!(
                "hypersurface grids are implemented for n = 2, got n = {}",
                domain.dim()
            )));
        }
        if radial == 0 || angular < 2 {
            return Err(Error::InvalidGrid(format!(
                "resolution ({radial}, {angular}) is too small"
            )));
        }
        if domain.exponents()[0] != 1 {
            return Err(Error::Unsupported(
                "hypersurface grids need a quadratic first coordinate".into(),
            ));
        }
        let m2 = domain.exponents()[1] as f64;
        // theta = (pi/2) u^m2 keeps |z_2| = sin(theta)^(1/m2) smooth in u
        let p = |u: f64| -> (f64, f64) { (u.powf(m2), m2 * u.powf(m2 - 1.0)) };
        let (us, wu) = gauss_legendre_unit(radial);
        let phis = periodic_nodes(angular);
        let wa = 2.0 * PI / angular as f64;
        let total = radial * angular * angular;
        let mut points = Vec::with_capacity(2 * total);
        let mut tangents = Vec::with_capacity(6 * total);
        let mut normals = Vec::with_capacity(2 * total);
        let mut weights = Vec::with_capacity(total);
        for (&u, &w) in us.iter().zip(&wu) {
            let (pu, dpu) = p(u);
            let theta = FRAC_PI_2 * pu;
            let dtheta = FRAC_PI_2 * dpu;
            let (c, s) = (theta.cos(), theta.sin());
            let r1 = c;
            let r2 = s.powf(1.0 / m2);
            let dr1 = -s * dtheta;
            let dr2 = (1.0 / m2) * s.powf(1.0 / m2 - 1.0) * c * dtheta;
            for &p1 in &phis {
                let e1 = Complex64::from_polar(1.0, p1);
                for &p2 in &phis {
                    let e2 = Complex64::from_polar(1.0, p2);
                    let z = [r1 * e1, r2 * e2];
                    points.extend_from_slice(&z);
                    tangents.extend_from_slice(&[
                        dr1 * e1,
                        dr2 * e2,
                        Complex64::i() * z[0],
                        Complex64::new(0.0, 0.0),
                        Complex64::new(0.0, 0.0),
                        Complex64::i() * z[1],
                    ]);
                    let g = domain.d_rho(&z);
                    let gn = norm(&g);
                    normals.extend(g.iter().map(|x| x.conj() / gn));
                    weights.push(w * wa * wa);
                }
            }
        }
        Self::from_parts(2, points, tangents, normals, weights)
    }

    /// The unit sphere in C^2.
    pub fn sphere(radial: usize, angular: usize) -> Result<Self> {
        Self::reinhardt(&DefiningDomain::ball(2), radial, angular)
    }

    /// The image of the grid under `zeta -> center + scale * zeta`.
    pub fn scaled(&self, center: &[Complex64], scale: f64) -> Result<Self> {
        if center.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: center.len(),
            });
        }
        if !(scale > 0.0) {
            return Err(Error::InvalidGrid(format!("scale must be positive, got {scale}")));
        }
        let n = self.dim;
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| center[i % n] + scale * p)
            .collect();
        let tangents = self.tangents.iter().map(|t| scale * t).collect();
        let weights = self.weights.clone();
        Ok(HypersurfaceGrid {
            dim: n,
            points,
            tangents,
            normals: self.normals.clone(),
            weights,
        })
    }

    /// Swap the first two tangents wherever the frame is negatively oriented.
    fn fix_orientation(&mut self) -> Result<()> {
        let n = self.dim;
        let k = 2 * n - 1;
        for node in 0..self.len() {
            let mut cols: Vec<&[Complex64]> = vec![self.normal(node)];
            cols.extend((0..k).map(|i| self.tangent(node, i)));
            let d = real_determinant(&cols);
            if !d.is_finite() {
                return Err(Error::InvalidGrid(format!("non-finite frame at node {node}")));
            }
            if d < 0.0 {
                if k == 1 {
                    for t in &mut self.tangents[node * n..(node + 1) * n] {
                        *t = -*t;
                    }
                } else {
                    let base = node * k * n;
                    for l in 0..n {
                        self.tangents.swap(base + l, base + n + l);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, node: usize) -> &[Complex64] {
        &self.points[node * self.dim..(node + 1) * self.dim]
    }

    /// Tangent `d zeta / d u_i` at a node, `0 <= i < 2n - 1`.
    pub fn tangent(&self, node: usize, i: usize) -> &[Complex64] {
        let n = self.dim;
        let base = (node * (2 * n - 1) + i) * n;
        &self.tangents[base..base + n]
    }

    /// Unit outward normal at a node, as a complex vector.
    pub fn normal(&self, node: usize) -> &[Complex64] {
        &self.normals[node * self.dim..(node + 1) * self.dim]
    }

    pub fn weight(&self, node: usize) -> f64 {
        self.weights[node]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Surface measure density `|t_1 ^ ... ^ t_{2n-1}|` at a node.
    pub fn surface_density(&self, node: usize) -> f64 {
        let k = 2 * self.dim - 1;
        let t: Vec<Vec<f64>> = (0..k).map(|i| realify(self.tangent(node, i))).collect();
        let gram = DMatrix::from_fn(k, k, |a, b| t[a].iter().zip(&t[b]).map(|(x, y)| x * y).sum::<f64>());
        gram.determinant().max(0.0).sqrt()
    }

    /// Total surface measure.
    pub fn total_area(&self) -> f64 {
        (0..self.len()).map(|k| self.weights[k] * self.surface_density(k)).sum()
    }

    /// Largest `|rho|` over the nodes.
    pub fn max_defect(&self, domain: &DefiningDomain) -> f64 {
        (0..self.len()).map(|k| domain.rho(self.point(k)).abs()).fold(0.0, f64::max)
    }

    /// Distance from `z` to the nearest node.
    pub fn distance_to_nodes(&self, z: &[Complex64]) -> f64 {
        (0..self.len())
            .map(|k| super::domain::dist(self.point(k), z))
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_area_and_defect() {
        let g = HypersurfaceGrid::sphere(16, 16).unwrap();
        // |S^3| = 2 pi^2
        assert!((g.total_area() - 2.0 * PI * PI).abs() < 1e-12);
        assert!(g.max_defect(&DefiningDomain::ball(2)) < 1e-14);
    }

    #[test]
    fn egg_nodes_lie_on_the_boundary() {
        let egg = DefiningDomain::egg(2).unwrap();
        let g = HypersurfaceGrid::reinhardt(&egg, 24, 16).unwrap();
        assert!(g.max_defect(&egg) < 1e-10);
        let coarse = HypersurfaceGrid::reinhardt(&egg, 16, 16).unwrap().total_area();
        assert!((g.total_area() - coarse).abs() < 1e-8 * coarse);
    }

    #[test]
    fn frames_are_positively_oriented() {
        let egg = DefiningDomain::egg(3).unwrap();
        let g = HypersurfaceGrid::reinhardt(&egg, 8, 6).unwrap();
        for k in 0..g.len() {
            let d = real_determinant(&[g.normal(k), g.tangent(k, 0), g.tangent(k, 1), g.tangent(k, 2)]);
            assert!(d > 0.0);
        }
        let c = HypersurfaceGrid::circle(8).unwrap();
        for k in 0..c.len() {
            assert!(real_determinant(&[c.normal(k), c.tangent(k, 0)]) > 0.0);
        }
    }

    #[test]
    fn scaling_scales_area() {
        let g = HypersurfaceGrid::sphere(12, 12).unwrap();
        let c = [Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.0)];
        let s = g.scaled(&c, 0.5).unwrap();
        assert!((s.total_area() - 0.125 * g.total_area()).abs() < 1e-12);
        let r = super::super::domain::dist(s.point(7), &c);
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(HypersurfaceGrid::sphere(0, 8).is_err());
        assert!(HypersurfaceGrid::reinhardt(&DefiningDomain::ball(3), 4, 4).is_err());
    }
}
