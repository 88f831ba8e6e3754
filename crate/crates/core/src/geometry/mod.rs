//! Planar contours, defining-function domains in C^n and boundary grids.

pub mod contour;
pub mod domain;
pub mod grid;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use contour::{
    area_integrate, area_integrate_with_order, trapezoid_integrate, AreaQuadrature, Curve,
    Parametrization, PlanarContour, DEFAULT_RADIAL_ORDER,
};
pub use domain::{CnPoint, DefiningDomain, LeviConstants, Region};
pub use grid::{real_determinant, realify, HypersurfaceGrid};

fn one() -> f64 {
    1.0
}

fn two() -> usize {
    2
}

/// JSON description of a test domain, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Circle {
        #[serde(default)]
        center: [f64; 2],
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        parametrization: Parametrization,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        parametrization: Parametrization,
    },
    /// `(1 + a cos(k t)) e^{it}`.
    PerturbedCircle {
        a: f64,
        k: u32,
        #[serde(default)]
        parametrization: Parametrization,
    },
    Ball {
        #[serde(default = "two")]
        n: usize,
    },
    /// `|z1|^2 + |z2|^(2m) < 1`.
    Egg { m: u32 },
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn is_planar(&self) -> bool {
        matches!(
            self,
            DomainSpec::Circle { .. } | DomainSpec::Ellipse { .. } | DomainSpec::PerturbedCircle { .. }
        )
    }

    pub fn curve(&self) -> Result<(Curve, Parametrization)> {
        match *self {
            DomainSpec::Circle {
                center,
                radius,
                parametrization,
            } => Ok((
                Curve::Circle {
                    center: Complex64::new(center[0], center[1]),
                    radius,
                },
                parametrization,
            )),
            DomainSpec::Ellipse { a, b, parametrization } => Ok((Curve::Ellipse { a, b }, parametrization)),
            DomainSpec::PerturbedCircle { a, k, parametrization } => Ok((
                Curve::PerturbedCircle {
                    amplitude: a,
                    frequency: k,
                },
                parametrization,
            )),
            _ => Err(Error::Config(format!("{self:?} is not a planar domain"))),
        }
    }

    /// The contour sampled at `n` nodes.
    pub fn contour(&self, n: usize) -> Result<PlanarContour> {
        let (curve, param) = self.curve()?;
        PlanarContour::with_parametrization(curve, n, param)
    }

    pub fn defining_domain(&self) -> Result<DefiningDomain> {
        match *self {
            DomainSpec::Ball { n } if n >= 1 => Ok(DefiningDomain::ball(n)),
            DomainSpec::Egg { m } => DefiningDomain::egg(m),
            _ => Err(Error::Config(format!("{self:?} is not a domain in C^n"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_domain_descriptions() {
        let s = DomainSpec::from_json(r#"{"kind": "perturbed_circle", "a": 0.2, "k": 3}"#).unwrap();
        let c = s.contour(64).unwrap();
        assert_eq!(c.parametrization(), Parametrization::Arclength);
        let s = DomainSpec::from_json(r#"{"kind": "egg", "m": 2}"#).unwrap();
        assert_eq!(s.defining_domain().unwrap().exponents(), &[1, 2]);
        let s = DomainSpec::from_json(r#"{"kind": "circle"}"#).unwrap();
        assert!(s.is_planar());
        assert!(s.defining_domain().is_err());
        assert!(DomainSpec::from_json(r#"{"kind": "torus"}"#).is_err());
        let s = DomainSpec::from_json(r#"{"kind": "ellipse", "a": 1.2, "b": 1.0, "parametrization": "native"}"#).unwrap();
        assert_eq!(s.contour(32).unwrap().parametrization(), Parametrization::Native);
    }
}
