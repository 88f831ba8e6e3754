//! Python bindings for the reprokernel library.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use reprokernel::cli::{self, ExperimentConfig};
use reprokernel::geometry::{Curve, DefiningDomain, HypersurfaceGrid, Parametrization, PlanarContour};
use reprokernel::kerzman_stein::{self as ks, BoundaryOperator};
use reprokernel::planar_kernels::{self as pk, HoloBasis, Space};
use reprokernel::several_complex as sc;
use reprokernel::Error;

fn to_py(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_space(name: &str) -> PyResult<Space> {
    match name {
        "bergman" => Ok(Space::Bergman),
        "hardy" => Ok(Space::Hardy),
        other => Err(PyValueError::new_err(format!("unknown space {other:?}"))),
    }
}

/// A closed planar contour sampled at equally spaced parameter values.
#[pyclass(name = "Contour", frozen)]
pub struct PyContour {
    inner: PlanarContour,
}

fn contour(curve: Curve, n: usize, native: bool) -> PyResult<PyContour> {
    let param = if native {
        Parametrization::Native
    } else {
        Parametrization::Arclength
    };
    PlanarContour::with_parametrization(curve, n, param)
        .map(|inner| PyContour { inner })
        .map_err(to_py)
}

#[pymethods]
impl PyContour {
    #[staticmethod]
    #[pyo3(signature = (n, radius = 1.0, center = Complex64::new(0.0, 0.0)))]
    fn circle(n: usize, radius: f64, center: Complex64) -> PyResult<Self> {
        contour(Curve::Circle { center, radius }, n, false)
    }

    #[staticmethod]
    #[pyo3(signature = (a, b, n, native = false))]
    fn ellipse(a: f64, b: f64, n: usize, native: bool) -> PyResult<Self> {
        contour(Curve::Ellipse { a, b }, n, native)
    }

    #[staticmethod]
    #[pyo3(signature = (amplitude, frequency, n, native = false))]
    fn perturbed_circle(amplitude: f64, frequency: u32, n: usize, native: bool) -> PyResult<Self> {
        contour(Curve::PerturbedCircle { amplitude, frequency }, n, native)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn points(&self) -> Vec<Complex64> {
        self.inner.points().to_vec()
    }

    fn arclength_weights(&self) -> Vec<f64> {
        self.inner.arclength_weights()
    }

    fn length(&self) -> f64 {
        self.inner.length()
    }

    fn winding_number(&self, z: Complex64) -> f64 {
        self.inner.winding_number(z)
    }

    /// Cauchy integral of boundary samples at an interior point.
    fn cauchy(&self, samples: Vec<Complex64>, z: Complex64) -> PyResult<Complex64> {
        pk::cauchy_reproduce(&self.inner, &samples, z).map_err(to_py)
    }
}

/// Orthonormal polynomial basis of the Bergman or Hardy space.
#[pyclass(name = "Basis", frozen)]
pub struct PyBasis {
    inner: HoloBasis,
}

#[pymethods]
impl PyBasis {
    #[new]
    #[pyo3(signature = (contour, n, space = "bergman"))]
    fn new(contour: &PyContour, n: usize, space: &str) -> PyResult<Self> {
        let inner = pk::build_onb(&contour.inner, n, parse_space(space)?).map_err(to_py)?;
        Ok(PyBasis { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn eval(&self, z: Complex64) -> Vec<Complex64> {
        self.inner.eval_all(z)
    }

    /// Truncated kernel `sum_j phi_j(z) conj(phi_j(zeta))`.
    fn kernel(&self, z: Complex64, zeta: Complex64) -> Complex64 {
        pk::kernel_sum(&self.inner, z, zeta)
    }

    fn normalization_constants(&self) -> Vec<f64> {
        self.inner.normalization_constants()
    }
}

/// Nystrom matrix of a boundary operator with its quadrature weights.
#[pyclass(name = "Operator", frozen)]
pub struct PyOperator {
    inner: BoundaryOperator,
}

#[pymethods]
impl PyOperator {
    /// The Cauchy (Henkin) operator `H` of a contour.
    #[staticmethod]
    fn cauchy(contour: &PyContour) -> PyResult<Self> {
        ks::cauchy_operator(&contour.inner)
            .map(|inner| PyOperator { inner })
            .map_err(to_py)
    }

    /// `A = H* - H`.
    fn kerzman_stein(&self) -> Self {
        PyOperator {
            inner: ks::ks_operator(&self.inner),
        }
    }

    /// The Szego projection from `H` and `A` by a direct solve.
    fn szego(&self, a: &PyOperator) -> PyResult<Self> {
        ks::szego_projection_direct(&self.inner, &a.inner)
            .map(|inner| PyOperator { inner })
            .map_err(to_py)
    }

    fn adjoint(&self) -> Self {
        PyOperator {
            inner: self.inner.adjoint(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn singular_values(&self) -> Vec<f64> {
        self.inner.singular_values()
    }

    fn apply(&self, f: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        self.inner.apply(&f).map_err(to_py)
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.matrix();
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    }
}

/// `[HS - S, SH* - S, SH - H, H*S - H*]` residual norms.
#[pyfunction]
fn operator_identities(h: &PyOperator, s: &PyOperator) -> [f64; 4] {
    ks::operator_identities_report(&h.inner, &s.inner).as_array()
}

/// Values `S(z, pole)` of the Szego kernel extracted from a projection.
#[pyfunction]
fn szego_kernel(s: &PyOperator, contour: &PyContour, pole: Complex64, z: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let kernel = ks::szego_kernel_extract(&s.inner, &contour.inner, pole).map_err(to_py)?;
    z.into_iter().map(|p| kernel.eval(p).map_err(to_py)).collect()
}

/// A domain `{rho < 0}` in C^n.
#[pyclass(name = "Domain", frozen)]
pub struct PyDomain {
    inner: DefiningDomain,
}

#[pymethods]
impl PyDomain {
    #[staticmethod]
    #[pyo3(signature = (n = 2))]
    fn ball(n: usize) -> Self {
        PyDomain {
            inner: DefiningDomain::ball(n),
        }
    }

    /// `|z1|^2 + |z2|^(2m) < 1`.
    #[staticmethod]
    fn egg(m: u32) -> PyResult<Self> {
        DefiningDomain::egg(m).map(|inner| PyDomain { inner }).map_err(to_py)
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn rho(&self, z: Vec<Complex64>) -> f64 {
        self.inner.rho(&z)
    }

    fn d_rho(&self, z: Vec<Complex64>) -> Vec<Complex64> {
        self.inner.d_rho(&z)
    }

    fn radial_boundary_point(&self, direction: Vec<Complex64>) -> Vec<Complex64> {
        self.inner.radial_boundary_point(&direction)
    }

    fn complex_tangent_basis(&self, p: Vec<Complex64>) -> PyResult<Vec<Vec<Complex64>>> {
        self.inner.complex_tangent_basis(&p).map_err(to_py)
    }

    /// Sampled finite-type constants for declared type `m`.
    #[pyo3(signature = (m, samples = 10_000, seed = 0))]
    fn finite_type_bounds<'py>(&self, py: Python<'py>, m: u32, samples: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let r = sc::finite_type_bounds(&self.inner, m, samples, seed).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("c_62", r.c_62.value)?;
        d.set_item("c_62_g", r.c_62_g.value)?;
        d.set_item("c_63", r.c_63.value)?;
        d.set_item("max_order", r.max_order)?;
        Ok(d)
    }

    /// Smallest Levi separation margin over samples near boundary point `p`.
    #[pyo3(signature = (p, samples = 1000, seed = 0))]
    fn levi_margin(&self, p: Vec<Complex64>, samples: usize, seed: u64) -> PyResult<f64> {
        let points = sc::separation_samples(&self.inner, &p, samples, seed);
        sc::levi_separation_check(&self.inner, &p, &points)
            .map(|r| r.margin)
            .map_err(to_py)
    }
}

/// Quadrature nodes and weights on a boundary hypersurface.
#[pyclass(name = "Grid", frozen)]
pub struct PyGrid {
    inner: HypersurfaceGrid,
}

#[pymethods]
impl PyGrid {
    #[staticmethod]
    fn sphere(radial: usize, angular: usize) -> PyResult<Self> {
        HypersurfaceGrid::sphere(radial, angular)
            .map(|inner| PyGrid { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn reinhardt(domain: &PyDomain, radial: usize, angular: usize) -> PyResult<Self> {
        HypersurfaceGrid::reinhardt(&domain.inner, radial, angular)
            .map(|inner| PyGrid { inner })
            .map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn points(&self) -> Vec<Vec<Complex64>> {
        (0..self.inner.len()).map(|k| self.inner.point(k).to_vec()).collect()
    }

    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    fn total_area(&self) -> f64 {
        self.inner.total_area()
    }

    /// Bochner-Martinelli integral of node samples at interior `z`.
    fn bochner_martinelli(&self, f: Vec<Complex64>, z: Vec<Complex64>) -> PyResult<Complex64> {
        sc::bm_reproduce(&self.inner, &f, &z).map_err(to_py)
    }

    /// Henkin integral of node samples on a convex domain.
    fn henkin(&self, domain: &PyDomain, f: Vec<Complex64>, z: Vec<Complex64>) -> PyResult<Complex64> {
        sc::henkin_reproduce(&domain.inner, &self.inner, &f, &z)
            .map(|r| r.value)
            .map_err(to_py)
    }
}

#[pyfunction]
fn bergman_disc(z: Complex64, zeta: Complex64) -> PyResult<Complex64> {
    pk::bergman_disc(z, zeta).map_err(to_py)
}

#[pyfunction]
fn szego_disc(z: Complex64, zeta: Complex64) -> PyResult<Complex64> {
    pk::szego_disc(z, zeta).map_err(to_py)
}

#[pyfunction]
fn frac_diff(order: f64, f: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    ks::frac_diff(order, &f).map_err(to_py)
}

#[pyfunction]
fn frac_int(order: f64, f: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    ks::frac_int(order, &f).map_err(to_py)
}

/// Runs a command-line experiment from a JSON configuration and returns
/// `(report, passed)`.
#[pyfunction]
fn run_experiment(command: &str, config: &str) -> PyResult<(String, bool)> {
    let config = ExperimentConfig::from_json(config).map_err(to_py)?;
    let artifact = match command {
        "reproduce" => cli::run_reproduce(&config),
        "ks-report" => cli::run_ks_report(&config),
        "converge" => cli::run_convergence(&config),
        "finite-type" => cli::run_finite_type(&config),
        "onb" => cli::run_onb(&config),
        other => return Err(PyValueError::new_err(format!("unknown command {other:?}"))),
    }
    .map_err(to_py)?;
    Ok((artifact.report, artifact.pass))
}

#[pymodule]
fn reprokernel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyContour>()?;
    m.add_class::<PyBasis>()?;
    m.add_class::<PyOperator>()?;
    m.add_class::<PyDomain>()?;
    m.add_class::<PyGrid>()?;
    m.add_function(wrap_pyfunction!(operator_identities, m)?)?;
    m.add_function(wrap_pyfunction!(szego_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(bergman_disc, m)?)?;
    m.add_function(wrap_pyfunction!(szego_disc, m)?)?;
    m.add_function(wrap_pyfunction!(frac_diff, m)?)?;
    m.add_function(wrap_pyfunction!(frac_int, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
