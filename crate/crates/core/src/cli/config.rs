//! Experiment configuration files.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::planar_kernels::Space;
use crate::testfn::TestFunction;

/// Which reproducing formula an experiment evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    /// One-variable Cauchy integral.
    Cauchy,
    /// Cauchy integral plus the area term, for non-holomorphic data.
    CauchyPompeiu,
    /// Bochner-Martinelli surface integral.
    Bm,
    /// Bochner-Martinelli surface and volume terms.
    BmFull,
    /// Cauchy-Fantappie form with the ball weight.
    Ball,
    /// Henkin kernel of a convex domain.
    Henkin,
    /// Orthonormal-basis kernel sum against the closed disc kernel.
    Onb,
}

impl Formula {
    pub fn is_planar(self) -> bool {
        matches!(self, Formula::Cauchy | Formula::CauchyPompeiu | Formula::Onb)
    }

    /// Whether the formula reproduces non-holomorphic data.
    pub fn is_full(self) -> bool {
        matches!(self, Formula::CauchyPompeiu | Formula::BmFull)
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Formula::Cauchy => 1e-10,
            Formula::CauchyPompeiu => 1e-8,
            Formula::Bm | Formula::Ball | Formula::Henkin => 1e-5,
            Formula::BmFull => 1e-4,
            Formula::Onb => 1e-8,
        }
    }
}

/// One coordinate: a real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Real(f64),
    Complex([f64; 2]),
}

impl Coordinate {
    pub fn value(self) -> Complex64 {
        match self {
            Coordinate::Real(x) => Complex64::new(x, 0.0),
            Coordinate::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// A point: a list with one coordinate per dimension, or a bare coordinate
/// in the plane. A list of two numbers is two real coordinates; a complex
/// planar point is written `[[re, im]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    List(Vec<Coordinate>),
    Single(Coordinate),
}

impl PointSpec {
    pub fn coordinates(&self) -> Vec<Complex64> {
        match self {
            PointSpec::Single(c) => vec![c.value()],
            PointSpec::List(v) => v.iter().map(|c| c.value()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub domain: DomainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Formula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<TestFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<PointSpec>,
    /// Evaluation points for kernel samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointSpec>>,
    /// Boundary node count of planar contours.
    #[serde(default, alias = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Grid resolution of hypersurfaces in C^n.
    #[serde(default, alias = "res", skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    /// Neumann truncation order.
    #[serde(default, alias = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Declared type `m` for finite-type sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Orthonormal basis size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<Space>,
    /// Pole of the extracted Szego kernel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<Coordinate>,
    #[serde(default, alias = "tolerance", skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

pub const DEFAULT_NODES: usize = 256;
pub const DEFAULT_RESOLUTION: usize = 32;
pub const DEFAULT_NEUMANN_ORDER: usize = 8;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_BASIS: usize = 40;
pub const DEFAULT_RADIAL_ORDER: usize = 24;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// A configuration with only the domain set.
    pub fn for_domain(domain: DomainSpec) -> Self {
        ExperimentConfig {
            command: None,
            domain,
            formula: None,
            f: None,
            z: None,
            points: None,
            n: None,
            resolution: None,
            j: None,
            radial_order: None,
            samples: None,
            m: None,
            basis: None,
            space: None,
            pole: None,
            tol: None,
            seed: None,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::Config(format!("tolerance must be positive, got {t}")));
            }
        }
        if let Some(n) = self.n {
            if n < 4 || n % 2 != 0 {
                return Err(Error::Config(format!("node count must be even and at least 4, got {n}")));
            }
        }
        for (name, value) in [
            ("resolution", self.resolution),
            ("samples", self.samples),
            ("basis", self.basis),
            ("radial_order", self.radial_order),
        ] {
            if value == Some(0) {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if self.m == Some(0) {
            return Err(Error::Config("m must be positive".into()));
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.n.unwrap_or(DEFAULT_NODES)
    }

    pub fn resolution(&self) -> usize {
        self.resolution.unwrap_or(DEFAULT_RESOLUTION)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn formula(&self) -> Result<Formula> {
        self.formula
            .ok_or_else(|| Error::Config("missing field `formula`".into()))
    }

    pub fn test_function(&self) -> Result<&TestFunction> {
        self.f.as_ref().ok_or_else(|| Error::Config("missing field `f`".into()))
    }

    pub fn point(&self) -> Result<Vec<Complex64>> {
        self.z
            .as_ref()
            .map(|p| p.coordinates())
            .ok_or_else(|| Error::Config("missing field `z`".into()))
    }
}
