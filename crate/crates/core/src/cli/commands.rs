//! The experiment runners behind each subcommand.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::config::{ExperimentConfig, Formula, DEFAULT_BASIS, DEFAULT_NEUMANN_ORDER, DEFAULT_RADIAL_ORDER, DEFAULT_SAMPLES};
use super::report::{csv_float, csv_header, header, render};
use crate::error::{Error, Result};
use crate::geometry::{DefiningDomain, DomainSpec, HypersurfaceGrid, PlanarContour};
use crate::kerzman_stein::{
    cauchy_operator, difference_identity_residual, ks_operator, operator_identities_report, szego_kernel_extract,
    szego_projection_direct, szego_projection_neumann, BoundaryOperator,
};
use crate::planar_kernels::{bergman_disc, build_onb, cauchy_pompeiu, cauchy_reproduce, kernel_sum, szego_disc, Space};
use crate::several_complex::{
    bm_full, bm_reproduce, cf_reproduce, fiber_ratio, finite_type_bounds, henkin_reproduce, sweep_radii, BallWeight,
};

/// Output of one experiment: the main report, side files keyed by their
/// extension, and whether every tolerance was met.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub report: String,
    pub extras: Vec<(String, String)>,
    pub pass: bool,
}

/// Planar resolution sweep of the convergence study.
pub const NODE_SWEEP: [usize; 5] = [32, 64, 128, 256, 512];
/// Grid resolution sweep in C^n.
pub const GRID_SWEEP: [usize; 5] = [8, 12, 16, 24, 32];
/// Basis sizes of the orthonormal-basis sweep.
pub const BASIS_SWEEP: [usize; 5] = [5, 10, 20, 30, 40];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_point(z: &[Complex64]) -> Result<Complex64> {
    match z {
        [p] => Ok(*p),
        _ => Err(Error::DimensionMismatch {
            expected: 1,
            got: z.len(),
        }),
    }
}

fn is_unit_disc(domain: &DomainSpec) -> bool {
    matches!(domain, DomainSpec::Circle { center, radius, .. } if *center == [0.0, 0.0] && *radius == 1.0)
}

/// Boundary grid of a domain in C^n at the given resolution.
pub fn hypersurface(domain: &DefiningDomain, resolution: usize) -> Result<HypersurfaceGrid> {
    match domain.dim() {
        1 => HypersurfaceGrid::circle(resolution.max(4)),
        2 => HypersurfaceGrid::reinhardt(domain, resolution, resolution),
        n => Err(Error::Unsupported(format!("boundary grids in dimension {n}"))),
    }
}

/// One evaluation of a reproducing formula.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Complex64,
    pub oracle: Complex64,
    pub details: Map<String, Value>,
}

impl Evaluation {
    pub fn abs_err(&self) -> f64 {
        (self.value - self.oracle).norm()
    }
}

/// Evaluates `formula` at the configured point, with `resolution` boundary
/// nodes (planar) or grid resolution (C^n).
pub fn evaluate(config: &ExperimentConfig, formula: Formula, resolution: usize) -> Result<Evaluation> {
    let f = config.test_function()?;
    let z = config.point()?;
    let mut details = Map::new();
    let value = if formula.is_planar() {
        let contour = config.domain.contour(resolution)?;
        f.check_dim(1)?;
        let zp = single_point(&z)?;
        if contour.winding_number(zp) < 0.5 {
            return Err(Error::OutsideDomain(format!("{zp}")));
        }
        match formula {
            Formula::Cauchy => {
                let samples: Vec<Complex64> = contour.points().iter().map(|&p| f.eval(&[p])).collect();
                cauchy_reproduce(&contour, &samples, zp)?
            }
            Formula::CauchyPompeiu => {
                let r = cauchy_pompeiu(&contour, |p| f.eval(&[p]), |p| f.dbar(&[p])[0], zp)?;
                details.insert("boundary".into(), json!(r.boundary));
                details.insert("area".into(), json!(r.area));
                r.value
            }
            _ => return Err(Error::Config(format!("{formula:?} does not reproduce point values"))),
        }
    } else {
        let domain = config.domain.defining_domain()?;
        if z.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                got: z.len(),
            });
        }
        f.check_dim(domain.dim())?;
        if !(domain.rho(&z) < 0.0) {
            return Err(Error::OutsideDomain(format!("{z:?}")));
        }
        let grid = hypersurface(&domain, resolution)?;
        let samples: Vec<Complex64> = (0..grid.len()).map(|k| f.eval(grid.point(k))).collect();
        details.insert("nodes".into(), json!(grid.len()));
        match formula {
            Formula::Bm => bm_reproduce(&grid, &samples, &z)?,
            Formula::BmFull => {
                let order = config.radial_order.unwrap_or(DEFAULT_RADIAL_ORDER);
                let r = bm_full(&grid, |p| f.eval(p), |p| f.dbar(p), &z, order)?;
                details.insert("surface".into(), json!(r.surface));
                details.insert("volume".into(), json!(r.volume));
                r.value
            }
            Formula::Ball => {
                if !domain.is_ball() {
                    return Err(Error::Config("the ball weight needs a ball domain".into()));
                }
                cf_reproduce(&grid, &BallWeight, &samples, &z)?
            }
            Formula::Henkin => {
                let r = henkin_reproduce(&domain, &grid, &samples, &z)?;
                details.insert("factored_value".into(), json!(r.factored_value));
                details.insert("path_discrepancy".into(), json!(r.path_discrepancy));
                details.insert("holomorphy_residual".into(), json!(r.holomorphy_residual));
                r.value
            }
            _ => return Err(Error::Config(format!("{formula:?} needs a planar domain"))),
        }
    };
    if !f.is_holomorphic() && !formula.is_full() {
        details.insert(
            "warning".into(),
            json!("the test function is not holomorphic; only the full formulas reproduce it"),
        );
    }
    Ok(Evaluation {
        value,
        oracle: f.eval(&z),
        details,
    })
}

fn default_resolution(config: &ExperimentConfig, formula: Formula) -> usize {
    if formula.is_planar() {
        config.nodes()
    } else {
        config.resolution()
    }
}

pub fn run_reproduce(config: &ExperimentConfig) -> Result<Artifact> {
    let formula = config.formula()?;
    let resolution = default_resolution(config, formula);
    let tol = config.tol.unwrap_or(formula.default_tolerance());
    let e = evaluate(config, formula, resolution)?;
    let abs_err = e.abs_err();
    let pass = abs_err <= tol;
    let mut map = header("reproduce", config)?;
    map.insert("formula".into(), json!(formula));
    map.insert("resolution".into(), json!(resolution));
    map.insert("value".into(), json!(e.value));
    map.insert("oracle".into(), json!(e.oracle));
    map.insert("abs_err".into(), json!(abs_err));
    map.insert("tol".into(), json!(tol));
    map.insert("pass".into(), json!(pass));
    map.insert("details".into(), Value::Object(e.details));
    Ok(Artifact {
        report: render(map)?,
        extras: Vec::new(),
        pass,
    })
}

/// Default sample points, all with modulus at most 0.5.
fn default_points() -> Vec<Complex64> {
    vec![c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.35), c(-0.25, -0.25), c(0.3, -0.4)]
}

fn planar_points(config: &ExperimentConfig) -> Result<Vec<Complex64>> {
    match &config.points {
        Some(list) => list.iter().map(|p| single_point(&p.coordinates())).collect(),
        None => Ok(default_points()),
    }
}

fn planar_contour(config: &ExperimentConfig) -> Result<PlanarContour> {
    if !config.domain.is_planar() {
        return Err(Error::Config("this command needs a planar domain".into()));
    }
    config.domain.contour(config.nodes())
}

pub fn run_ks_report(config: &ExperimentConfig) -> Result<Artifact> {
    let contour = planar_contour(config)?;
    let tol = config.tol.unwrap_or(1e-5);
    let order = config.j.unwrap_or(DEFAULT_NEUMANN_ORDER);
    let h = cauchy_operator(&contour)?;
    let a = ks_operator(&h);
    let sigma = a.singular_values();
    let norm_a = sigma.first().copied().unwrap_or(0.0);
    let s = szego_projection_direct(&h, &a)?;
    let identities = operator_identities_report(&h, &s);
    let idempotence = s.compose(&s).sub(&s).norm();
    let self_adjointness = s.adjoint().sub(&s).norm();
    let difference = difference_identity_residual(&h, &a, &s);

    let mut map = header("ks-report", config)?;
    map.insert("nodes".into(), json!(contour.len()));
    map.insert("norm_a".into(), json!(norm_a));
    map.insert("norm_h".into(), json!(h.norm()));
    map.insert("diagonal_correction".into(), json!(h.diagonal_correction()));
    map.insert("identities".into(), serde_json::to_value(identities)?);
    map.insert("difference_identity".into(), json!(difference));
    map.insert("idempotence".into(), json!(idempotence));
    map.insert("self_adjointness".into(), json!(self_adjointness));

    match szego_projection_neumann(&h, &a, 0) {
        Ok(first) => {
            let mut term: BoundaryOperator = h.clone();
            let mut sum = h.clone();
            let mut curve = Vec::with_capacity(order + 1);
            for j in 0..=order {
                if j > 0 {
                    term = term.compose(&a);
                    sum = sum.add(&term);
                }
                let bound = first.error_constant * first.norm_a.powi(j as i32 + 1);
                curve.push(json!({"order": j, "error": sum.sub(&s).norm(), "bound": bound}));
            }
            map.insert(
                "neumann".into(),
                json!({"diverges": false, "norm_estimate": first.norm_a, "error_constant": first.error_constant, "curve": curve}),
            );
        }
        Err(Error::NeumannDivergent(estimate)) => {
            map.insert("neumann".into(), json!({"diverges": true, "norm_estimate": estimate}));
        }
        Err(e) => return Err(e),
    }
    let profile: Vec<f64> = sigma.iter().take(32).copied().collect();
    map.insert("singular_values".into(), json!(profile));

    let pole = config.pole.map(|p| p.value()).unwrap_or(c(0.0, 0.0));
    let kernel = szego_kernel_extract(&s, &contour, pole)?;
    let disc = is_unit_disc(&config.domain);
    let mut samples = Vec::new();
    let mut max_oracle_err: f64 = 0.0;
    for z in planar_points(config)? {
        let value = kernel.eval(z)?;
        let mut entry = json!({"z": z, "value": value});
        if disc {
            let oracle = szego_disc(z, pole)?;
            let err = (value - oracle).norm();
            max_oracle_err = max_oracle_err.max(err);
            entry["oracle"] = json!(oracle);
            entry["abs_err"] = json!(err);
        }
        samples.push(entry);
    }
    map.insert("szego".into(), json!({"pole": pole, "samples": samples}));
    let pass = identities.max() <= tol && (!disc || max_oracle_err <= tol);
    map.insert("tol".into(), json!(tol));
    map.insert("pass".into(), json!(pass));

    let mut csv = csv_header("ks-report", config)?;
    csv.push_str("k,param,re_zeta,im_zeta,re_s,im_s\n");
    for (k, v) in kernel.boundary_values().iter().enumerate() {
        let zeta = contour.points()[k];
        csv.push_str(&format!(
            "{k},{},{},{},{},{}\n",
            csv_float(contour.params()[k]),
            csv_float(zeta.re),
            csv_float(zeta.im),
            csv_float(v.re),
            csv_float(v.im)
        ));
    }
    Ok(Artifact {
        report: render(map)?,
        extras: vec![("csv".into(), csv)],
        pass,
    })
}

/// Largest error of the truncated kernel sum against the closed disc kernel
/// over all pairs of sample points.
pub fn onb_kernel_error(config: &ExperimentConfig, contour: &PlanarContour, size: usize) -> Result<f64> {
    let space = config.space.unwrap_or(Space::Bergman);
    let basis = build_onb(contour, size, space)?;
    let points = planar_points(config)?;
    let mut worst: f64 = 0.0;
    for &z in &points {
        for &zeta in &points {
            let oracle = match space {
                Space::Bergman => bergman_disc(z, zeta)?,
                Space::Hardy => szego_disc(z, zeta)?,
            };
            worst = worst.max((kernel_sum(&basis, z, zeta) - oracle).norm());
        }
    }
    Ok(worst)
}

pub fn run_onb(config: &ExperimentConfig) -> Result<Artifact> {
    let contour = planar_contour(config)?;
    let size = config.basis.unwrap_or(DEFAULT_BASIS);
    let space = config.space.unwrap_or(Space::Bergman);
    let tol = config.tol.unwrap_or(Formula::Onb.default_tolerance());
    let basis = build_onb(&contour, size, space)?;
    let gram = basis.gram(&contour)?;
    let mut gram_dev: f64 = 0.0;
    for i in 0..size {
        for j in 0..size {
            let target = if i == j { 1.0 } else { 0.0 };
            gram_dev = gram_dev.max((gram[(i, j)] - target).norm());
        }
    }
    let points = planar_points(config)?;
    let disc = is_unit_disc(&config.domain);
    let mut samples = Vec::new();
    let mut worst: f64 = 0.0;
    for &z in &points {
        for &zeta in &points {
            let value = kernel_sum(&basis, z, zeta);
            let mut entry = json!({"z": z, "zeta": zeta, "value": value});
            if disc {
                let oracle = match space {
                    Space::Bergman => bergman_disc(z, zeta)?,
                    Space::Hardy => szego_disc(z, zeta)?,
                };
                let err = (value - oracle).norm();
                worst = worst.max(err);
                entry["oracle"] = json!(oracle);
                entry["abs_err"] = json!(err);
            }
            samples.push(entry);
        }
    }
    let pass = gram_dev <= tol && worst <= tol;
    let mut map = header("onb", config)?;
    map.insert("space".into(), json!(space));
    map.insert("basis".into(), json!(size));
    map.insert("normalization_constants".into(), json!(basis.normalization_constants()));
    map.insert("gram_deviation".into(), json!(gram_dev));
    map.insert("kernel".into(), json!(samples));
    if disc {
        map.insert("max_abs_err".into(), json!(worst));
    }
    map.insert("tol".into(), json!(tol));
    map.insert("pass".into(), json!(pass));
    Ok(Artifact {
        report: render(map)?,
        extras: Vec::new(),
        pass,
    })
}

pub fn run_convergence(config: &ExperimentConfig) -> Result<Artifact> {
    let formula = config.formula()?;
    let tol = config.tol.unwrap_or(formula.default_tolerance());
    let mut rows: Vec<(usize, f64)> = Vec::new();
    match formula {
        Formula::Onb => {
            if !is_unit_disc(&config.domain) {
                return Err(Error::Config("the basis sweep compares against the unit disc kernel".into()));
            }
            let contour = planar_contour(config)?;
            for size in BASIS_SWEEP {
                rows.push((size, onb_kernel_error(config, &contour, size)?));
            }
        }
        f if f.is_planar() => {
            for n in NODE_SWEEP {
                rows.push((n, evaluate(config, f, n)?.abs_err()));
            }
        }
        f => {
            for r in GRID_SWEEP {
                rows.push((r, evaluate(config, f, r)?.abs_err()));
            }
        }
    }
    let mut csv = csv_header("converge", config)?;
    csv.push_str("resolution,error,ratio,order\n");
    for (i, &(r, e)) in rows.iter().enumerate() {
        let (ratio, order) = match i.checked_sub(1).map(|k| rows[k]) {
            Some((r0, e0)) if e > 0.0 => (e0 / e, (e0 / e).ln() / (r as f64 / r0 as f64).ln()),
            _ => (f64::NAN, f64::NAN),
        };
        csv.push_str(&format!("{r},{},{},{}\n", csv_float(e), csv_float(ratio), csv_float(order)));
    }
    let pass = rows.last().is_some_and(|&(_, e)| e <= tol);
    Ok(Artifact {
        report: csv,
        extras: Vec::new(),
        pass,
    })
}

pub fn run_finite_type(config: &ExperimentConfig) -> Result<Artifact> {
    let domain = config.domain.defining_domain()?;
    let m = config.m.unwrap_or(domain.type_order());
    let samples = config.samples.unwrap_or(DEFAULT_SAMPLES);
    let mut map = header("finite-type", config)?;
    map.insert("m".into(), json!(m));
    map.insert("samples".into(), json!(samples));

    // rho((1, 0, ..) + t e_n) = t^(2 m_n) along the last coordinate axis
    let n = domain.dim();
    let mut zeta = vec![c(0.0, 0.0); n];
    zeta[0] = c(1.0, 0.0);
    let mut tau = vec![c(0.0, 0.0); n];
    tau[n - 1] = c(1.0, 0.0);
    let axis_order = domain.exponents()[n - 1];
    let fiber_dev = sweep_radii()
        .into_iter()
        .map(|t| (fiber_ratio(&domain, &zeta, &tau, t, axis_order) - 1.0).abs())
        .fold(0.0, f64::max);
    map.insert("axis_fiber_deviation".into(), json!(fiber_dev));

    let pass = match finite_type_bounds(&domain, m, samples, config.seed()) {
        Ok(r) => {
            map.insert("status".into(), json!("ok"));
            map.insert("c_62".into(), serde_json::to_value(&r.c_62)?);
            map.insert("c_62_g".into(), serde_json::to_value(&r.c_62_g)?);
            map.insert("c_63".into(), serde_json::to_value(&r.c_63)?);
            map.insert("max_order".into(), json!(r.max_order));
            true
        }
        Err(Error::FiniteTypeMismatch(message)) => {
            map.insert("status".into(), json!("mismatch"));
            map.insert("message".into(), json!(message));
            false
        }
        Err(e) => return Err(e),
    };
    map.insert("pass".into(), json!(pass));
    Ok(Artifact {
        report: render(map)?,
        extras: Vec::new(),
        pass,
    })
}
