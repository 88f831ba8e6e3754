//! Dense Nyström discretizations of boundary integral operators on a planar
//! contour, the Kerzman-Stein operator and the Szegő projection built from
//! it.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PlanarContour;
use crate::planar_kernels::cauchy_reproduce;

/// Iterations and relative tolerance of the power-iteration norm estimate
/// that guards the Neumann series.
pub const POWER_ITERATIONS: usize = 50;
pub const POWER_TOLERANCE: f64 = 1e-6;

/// Largest acceptable condition number of `I - A`.
pub const MAX_SOLVE_CONDITION: f64 = 1e8;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A matrix acting on node values, together with the arclength quadrature
/// weights that define the inner product `<f, g> = sum_k f_k conj(g_k) w_k`.
#[derive(Debug, Clone)]
pub struct BoundaryOperator {
    matrix: DMatrix<Complex64>,
    weights: Vec<f64>,
    /// Largest change made to the diagonal when enforcing `H 1 = 1`; zero for
    /// operators that are not built by a Nyström rule.
    diagonal_correction: f64,
}

impl BoundaryOperator {
    pub fn new(matrix: DMatrix<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != weights.len() {
            return Err(Error::NodeCountMismatch {
                expected: weights.len(),
                got: matrix.nrows(),
            });
        }
        Ok(BoundaryOperator {
            matrix,
            weights,
            diagonal_correction: 0.0,
        })
    }

    fn like(&self, matrix: DMatrix<Complex64>) -> Self {
        BoundaryOperator {
            matrix,
            weights: self.weights.clone(),
            diagonal_correction: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn diagonal_correction(&self) -> f64 {
        self.diagonal_correction
    }

    pub fn identity_like(&self) -> Self {
        self.like(DMatrix::identity(self.len(), self.len()))
    }

    /// `W^{-1} M^H W`, the adjoint in the weighted inner product.
    pub fn adjoint(&self) -> Self {
        let w = &self.weights;
        let mh = self.matrix.adjoint();
        self.like(DMatrix::from_fn(self.len(), self.len(), |j, k| mh[(j, k)] * (w[k] / w[j])))
    }

    /// `W^{1/2} M W^{-1/2}`: the same operator in an orthonormal frame.
    pub fn unitary_frame(&self) -> DMatrix<Complex64> {
        let s: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        DMatrix::from_fn(self.len(), self.len(), |j, k| self.matrix[(j, k)] * (s[j] / s[k]))
    }

    /// Singular values of the operator on `L^2` of the boundary, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.unitary_frame().singular_values().iter().cloned().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Operator 2-norm in the weighted inner product.
    pub fn norm(&self) -> f64 {
        self.singular_values().first().cloned().unwrap_or(0.0)
    }

    /// Power-iteration estimate of the weighted 2-norm.
    pub fn norm_estimate(&self, iterations: usize, tolerance: f64) -> f64 {
        let b = self.unitary_frame();
        let bh = b.adjoint();
        let n = self.len();
        // a fixed, non-symmetric start vector
        let mut v = DVector::from_fn(n, |k, _| Complex64::new(1.0 + 0.37 * k as f64 / n as f64, 0.11 * (k % 7) as f64));
        v /= Complex64::new(v.norm(), 0.0);
        let mut estimate = 0.0;
        for _ in 0..iterations {
            let u = &bh * (&b * &v);
            let lambda = u.norm();
            if lambda == 0.0 {
                return 0.0;
            }
            v = u / Complex64::new(lambda, 0.0);
            let next = lambda.sqrt();
            let converged = (next - estimate).abs() <= tolerance * next;
            estimate = next;
            if converged {
                break;
            }
        }
        estimate
    }

    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.len() {
            return Err(Error::NodeCountMismatch {
                expected: self.len(),
                got: f.len(),
            });
        }
        let v = DVector::from_column_slice(f);
        Ok((&self.matrix * v).iter().cloned().collect())
    }

    pub fn compose(&self, other: &BoundaryOperator) -> Self {
        self.like(&self.matrix * &other.matrix)
    }

    pub fn sub(&self, other: &BoundaryOperator) -> Self {
        self.like(&self.matrix - &other.matrix)
    }

    pub fn add(&self, other: &BoundaryOperator) -> Self {
        self.like(&self.matrix + &other.matrix)
    }

    /// `<f, g> = sum_k f_k conj(g_k) w_k`.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter()
            .zip(g)
            .zip(&self.weights)
            .map(|((a, b), w)| a * b.conj() * *w)
            .sum()
    }
}

/// First row of the circulant projection onto Fourier modes `1..N/2-1`:
/// `q[d] = (1/N) sum_{m=1}^{N/2-1} e^{i m d 2 pi / N}`.
fn positive_mode_projector(n: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for m in 1..n / 2 {
        buf[m] = Complex64::new(1.0 / n as f64, 0.0);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

/// Nyström matrix of `H f(z) = (1/2 pi i) PV int f(zeta) dzeta / (zeta - z)`.
///
/// The kernel in the contour parameter is split as
/// `(1/4 pi i) cot((s - t)/2) + smooth`. The cotangent part is the
/// projection onto nonnegative Fourier modes less half the mean, which is
/// applied exactly as a circulant; the smooth remainder
/// `1/(4 pi) + R(t, s)/(2 pi i)` with
/// `R = gamma'(s)/(gamma(s) - gamma(t)) - cot((s - t)/2)/2` uses the
/// trapezoid rule, with `R(t, t) = gamma''/(2 gamma')`. Finally the diagonal
/// absorbs the rounding-level defect in `H 1 = 1`.
pub fn cauchy_operator(contour: &PlanarContour) -> Result<BoundaryOperator> {
    let n = contour.len();
    let z = contour.points();
    let dz = contour.derivatives();
    let ddz = contour.second_derivatives();
    let t = contour.params();
    let h = contour.step();
    let scale = contour.diameter();
    for j in 0..n {
        let k = (j + 1) % n;
        if (z[j] - z[k]).norm() <= 1e-14 * scale {
            return Err(Error::InvalidContour(format!("coincident nodes {j} and {k}")));
        }
    }
    let q = positive_mode_projector(n);
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut m = DMatrix::from_fn(n, n, |j, k| {
        let r = if j == k {
            ddz[j] / (2.0 * dz[j])
        } else {
            dz[k] / (z[k] - z[j]) - 0.5 / ((t[k] - t[j]) / 2.0).tan()
        };
        let smooth = Complex64::new(1.0 / (4.0 * PI), 0.0) + r / two_pi_i;
        q[(j + n - k) % n] + smooth * h
    });
    let mut correction: f64 = 0.0;
    for j in 0..n {
        let row: Complex64 = m.row(j).iter().sum();
        let c = ONE - row;
        correction = correction.max(c.norm());
        m[(j, j)] += c;
    }
    Ok(BoundaryOperator {
        matrix: m,
        weights: contour.arclength_weights(),
        diagonal_correction: correction,
    })
}

/// `A = H* - H`.
pub fn ks_operator(h: &BoundaryOperator) -> BoundaryOperator {
    h.adjoint().sub(h)
}

/// `S = H (I - A)^{-1}` by a dense LU solve.
pub fn szego_projection_direct(h: &BoundaryOperator, a: &BoundaryOperator) -> Result<BoundaryOperator> {
    let i_minus_a = h.identity_like().sub(a);
    let sv = i_minus_a.singular_values();
    let cond = sv[0] / sv[sv.len() - 1];
    if !(cond <= MAX_SOLVE_CONDITION) {
        return Err(Error::IllConditionedSolve(cond));
    }
    // S (I - A) = H  <=>  (I - A)^T S^T = H^T
    let lu = i_minus_a.matrix.transpose().lu();
    let st = lu
        .solve(&h.matrix.transpose())
        .ok_or(Error::IllConditionedSolve(f64::INFINITY))?;
    Ok(h.like(st.transpose()))
}

/// Truncated Neumann series `S_J = sum_{j=0}^{J} H A^j` with its a priori
/// error bound `||S_J - S|| <= C ||A||^(J+1)`, `C = ||H|| / (1 - ||A||)`.
#[derive(Debug, Clone)]
pub struct NeumannProjection {
    pub operator: BoundaryOperator,
    pub order: usize,
    pub norm_a: f64,
    pub error_constant: f64,
}

impl NeumannProjection {
    pub fn error_bound(&self) -> f64 {
        self.error_constant * self.norm_a.powi(self.order as i32 + 1)
    }
}

pub fn szego_projection_neumann(h: &BoundaryOperator, a: &BoundaryOperator, order: usize) -> Result<NeumannProjection> {
    let estimate = a.norm_estimate(POWER_ITERATIONS, POWER_TOLERANCE);
    if estimate >= 1.0 {
        return Err(Error::NeumannDivergent(estimate));
    }
    let mut term = h.matrix.clone();
    let mut sum = term.clone();
    for _ in 0..order {
        term = &term * &a.matrix;
        sum += &term;
    }
    Ok(NeumannProjection {
        operator: h.like(sum),
        order,
        norm_a: estimate,
        error_constant: h.norm() / (1.0 - estimate),
    })
}

/// Residuals of `HS = S`, `SH* = S`, `SH = H` and `H*S = H*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    pub hs_minus_s: f64,
    pub s_hstar_minus_s: f64,
    pub sh_minus_h: f64,
    pub hstar_s_minus_hstar: f64,
}

impl IdentityResiduals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.hs_minus_s, self.s_hstar_minus_s, self.sh_minus_h, self.hstar_s_minus_hstar]
    }

    pub fn max(&self) -> f64 {
        self.as_array().into_iter().fold(0.0, f64::max)
    }
}

pub fn operator_identities_report(h: &BoundaryOperator, s: &BoundaryOperator) -> IdentityResiduals {
    let hs = h.adjoint();
    IdentityResiduals {
        hs_minus_s: h.compose(s).sub(s).norm(),
        s_hstar_minus_s: s.compose(&hs).sub(s).norm(),
        sh_minus_h: s.compose(h).sub(h).norm(),
        hstar_s_minus_hstar: hs.compose(s).sub(&hs).norm(),
    }
}

/// `||(S - H) - S A||`, which vanishes when `S (I - A) = H`.
pub fn difference_identity_residual(h: &BoundaryOperator, a: &BoundaryOperator, s: &BoundaryOperator) -> f64 {
    s.sub(h).sub(&s.compose(a)).norm()
}

/// Boundary values of `S(., a)` and an interior evaluator.
#[derive(Debug, Clone)]
pub struct SzegoKernel {
    contour: PlanarContour,
    pole: Complex64,
    boundary: Vec<Complex64>,
}

impl SzegoKernel {
    pub fn pole(&self) -> Complex64 {
        self.pole
    }

    /// `S(zeta_k, a)` at the contour nodes.
    pub fn boundary_values(&self) -> &[Complex64] {
        &self.boundary
    }

    /// `S(z, a)` for interior `z`, by the Cauchy integral of the boundary
    /// values.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        cauchy_reproduce(&self.contour, &self.boundary, z)
    }
}

/// The density `k_a = conj((1/2 pi i) T / (zeta - a))`, which satisfies
/// `<f, k_a> = f(a)` for boundary traces of holomorphic `f`.
pub fn reproducing_density(contour: &PlanarContour, a: Complex64) -> Vec<Complex64> {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    (0..contour.len())
        .map(|k| (contour.unit_tangent(k) / (two_pi_i * (contour.points()[k] - a))).conj())
        .collect()
}

pub fn szego_kernel_extract(s: &BoundaryOperator, contour: &PlanarContour, a: Complex64) -> Result<SzegoKernel> {
    if s.len() != contour.len() {
        return Err(Error::NodeCountMismatch {
            expected: contour.len(),
            got: s.len(),
        });
    }
    let guard = crate::planar_kernels::PLANAR_GUARD_FRACTION * contour.diameter();
    let d = contour.distance_to_nodes(a);
    if d < guard {
        return Err(Error::GuardViolation { distance: d, guard });
    }
    if contour.winding_number(a) < 0.5 {
        return Err(Error::OutsideDomain(format!("{a}")));
    }
    let boundary = s.apply(&reproducing_density(contour, a))?;
    Ok(SzegoKernel {
        contour: contour.clone(),
        pole: a,
        boundary,
    })
}

/// Singular values of `A` in the weighted inner product, descending.
pub fn compactness_profile(a: &BoundaryOperator) -> Vec<f64> {
    a.singular_values()
}
