//! A small language for test functions of several complex variables.
//!
//! A function is a sum of terms separated by `+` or `-`; a term is a product
//! of factors separated by `*`. Factors are real constants, `i`,
//! `z1^p`, `conj(z1)^p` and `exp(z1)`; `z` abbreviates `z1` and a bare `exp` means `exp(z1)`. For example
//! `z1*z2`, `conj(z1)`, `z1*conj(z1)` or `2*exp(z2) - 0.5*z1^3`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Factor {
    Pow { var: usize, power: u32 },
    ConjPow { var: usize, power: u32 },
    Exp { var: usize },
}

impl Factor {
    fn eval(&self, z: &[Complex64]) -> Complex64 {
        match *self {
            Factor::Pow { var, power } => z[var].powu(power),
            Factor::ConjPow { var, power } => z[var].conj().powu(power),
            Factor::Exp { var } => z[var].exp(),
        }
    }

    /// `d / d conj(z_j)` of the factor.
    fn dbar(&self, z: &[Complex64], j: usize) -> Complex64 {
        match *self {
            Factor::ConjPow { var, power } if var == j && power > 0 => {
                power as f64 * z[var].conj().powu(power - 1)
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }

    fn var(&self) -> usize {
        match *self {
            Factor::Pow { var, .. } | Factor::ConjPow { var, .. } | Factor::Exp { var } => var,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    coefficient: Complex64,
    factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    source: String,
    terms: Vec<Term>,
}

fn parse_var(s: &str) -> Result<usize> {
    let s = s.trim();
    if s == "z" {
        return Ok(0);
    }
    let idx = s
        .strip_prefix('z')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| Error::Config(format!("unknown variable {s:?}")))?;
    Ok(idx - 1)
}

fn split_power(s: &str) -> Result<(&str, u32)> {
    match s.rsplit_once('^') {
        Some((base, p)) if !base.ends_with(')') || base.starts_with("conj(") => {
            let p = p
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::Config(format!("bad exponent in {s:?}")))?;
            Ok((base.trim(), p))
        }
        _ => Ok((s.trim(), 1)),
    }
}

fn parse_factor(s: &str) -> Result<(Complex64, Option<Factor>)> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Config("empty factor".into()));
    }
    if s == "i" {
        return Ok((Complex64::i(), None));
    }
    if let Ok(c) = s.parse::<f64>() {
        return Ok((Complex64::new(c, 0.0), None));
    }
    if s == "exp" {
        return Ok((Complex64::new(1.0, 0.0), Some(Factor::Exp { var: 0 })));
    }
    if let Some(inner) = s.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
        return Ok((Complex64::new(1.0, 0.0), Some(Factor::Exp { var: parse_var(inner)? })));
    }
    let (base, power) = split_power(s)?;
    if let Some(inner) = base.strip_prefix("conj(").and_then(|r| r.strip_suffix(')')) {
        return Ok((
            Complex64::new(1.0, 0.0),
            Some(Factor::ConjPow { var: parse_var(inner)?, power }),
        ));
    }
    Ok((Complex64::new(1.0, 0.0), Some(Factor::Pow { var: parse_var(base)?, power })))
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(source: &str) -> Result<Self> {
        // split on top-level + and -, keeping the sign with the term
        let mut pieces: Vec<(f64, String)> = Vec::new();
        let mut depth = 0i32;
        let mut sign = 1.0;
        let mut current = String::new();
        let mut prev = ' ';
        for ch in source.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let exponent_sign = prev == 'e' || prev == 'E';
            if depth == 0 && (ch == '+' || ch == '-') && !exponent_sign {
                if !current.trim().is_empty() {
                    pieces.push((sign, current.clone()));
                } else if ch == '-' {
                    sign = -sign;
                    current.clear();
                    prev = ch;
                    continue;
                }
                current.clear();
                sign = if ch == '-' { -1.0 } else { 1.0 };
            } else if !ch.is_whitespace() {
                current.push(ch);
            }
            if !ch.is_whitespace() {
                prev = ch;
            }
        }
        if depth != 0 {
            return Err(Error::Config(format!("unbalanced parentheses in {source:?}")));
        }
        if current.trim().is_empty() {
            return Err(Error::Config(format!("empty term in {source:?}")));
        }
        pieces.push((sign, current));
        let mut terms = Vec::with_capacity(pieces.len());
        for (sign, piece) in pieces {
            let mut coefficient = Complex64::new(sign, 0.0);
            let mut factors = Vec::new();
            for f in piece.split('*') {
                let (c, factor) = parse_factor(f)?;
                coefficient *= c;
                factors.extend(factor);
            }
            terms.push(Term { coefficient, factors });
        }
        Ok(TestFunction {
            source: source.trim().to_string(),
            terms,
        })
    }
}

impl TestFunction {
    pub fn parse(source: &str) -> Result<Self> {
        source.parse()
    }

    /// Smallest dimension in which every variable exists.
    pub fn min_dim(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|f| f.var() + 1))
            .max()
            .unwrap_or(1)
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.min_dim() > n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.min_dim(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * t.factors.iter().map(|f| f.eval(z)).product::<Complex64>())
            .sum()
    }

    /// `(d f / d conj(z_1), ..., d f / d conj(z_n))`.
    pub fn dbar(&self, z: &[Complex64]) -> Vec<Complex64> {
        (0..z.len())
            .map(|j| {
                self.terms
                    .iter()
                    .map(|t| {
                        let values: Vec<Complex64> = t.factors.iter().map(|f| f.eval(z)).collect();
                        let mut total = Complex64::new(0.0, 0.0);
                        for (a, f) in t.factors.iter().enumerate() {
                            let d = f.dbar(z, j);
                            if d != Complex64::new(0.0, 0.0) {
                                let rest: Complex64 = values
                                    .iter()
                                    .enumerate()
                                    .filter(|(b, _)| *b != a)
                                    .map(|(_, v)| *v)
                                    .product();
                                total += d * rest;
                            }
                        }
                        t.coefficient * total
                    })
                    .sum()
            })
            .collect()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.iter().all(|t| {
            t.factors
                .iter()
                .all(|f| !matches!(f, Factor::ConjPow { power, .. } if *power > 0))
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Serialize for TestFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for TestFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluates_and_differentiates() {
        let z = [c(0.3, 0.1), c(-0.2, 0.4)];
        let f = TestFunction::parse("z1*z2").unwrap();
        assert_eq!(f.eval(&z), z[0] * z[1]);
        assert!(f.is_holomorphic());
        assert_eq!(f.dbar(&z), vec![c(0.0, 0.0); 2]);

        let g = TestFunction::parse("z1*conj(z1) - 2*conj(z2)^2 + i").unwrap();
        let expect = z[0].norm_sqr() - 2.0 * z[1].conj().powu(2) + Complex64::i();
        assert!((g.eval(&z) - expect).norm() < 1e-15);
        assert!(!g.is_holomorphic());
        let d = g.dbar(&z);
        assert!((d[0] - z[0]).norm() < 1e-15);
        assert!((d[1] + 4.0 * z[1].conj()).norm() < 1e-15);
        assert_eq!(g.min_dim(), 2);
    }

    #[test]
    fn parses_constants_and_exponentials() {
        let f = TestFunction::parse("-0.5*exp(z) + 1e-1*z^3").unwrap();
        let z = [c(0.2, -0.3)];
        let expect = -0.5 * z[0].exp() + 0.1 * z[0].powu(3);
        assert!((f.eval(&z) - expect).norm() < 1e-15);
        assert_eq!(TestFunction::parse("1").unwrap().eval(&z), c(1.0, 0.0));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "w1", "z0", "conj(z1", "z1^x", "z1 + "] {
            assert!(TestFunction::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn round_trips_through_json() {
        let f = TestFunction::parse("z1^2").unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "\"z1^2\"");
        let g: TestFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
