//! Fractional differentiation and integration on the periodic model domain,
//! realized as Fourier multipliers `|k|^lambda` and `|k|^(-mu)` on the
//! nonzero modes. The mean is left untouched.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

fn check_order(order: f64) -> Result<()> {
    if order > 0.0 && order < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder(order))
    }
}

/// Multiplies Fourier mode `k != 0` by `|k|^power`, with `k` the signed
/// frequency of the FFT bin. The Nyquist bin uses `|k| = N/2`.
fn multiplier(f: &[Complex64], power: f64) -> Vec<Complex64> {
    let n = f.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::new();
    let mut buf = f.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate().skip(1) {
        let k = j.min(n - j) as f64;
        *c *= k.powf(power) / n as f64;
    }
    buf[0] /= n as f64;
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

/// `D^lambda`: mode `k` scaled by `|k|^lambda`.
pub fn frac_diff(lambda: f64, f: &[Complex64]) -> Result<Vec<Complex64>> {
    check_order(lambda)?;
    Ok(multiplier(f, lambda))
}

/// `I^mu`: mode `k` scaled by `|k|^(-mu)`.
pub fn frac_int(mu: f64, f: &[Complex64]) -> Result<Vec<Complex64>> {
    check_order(mu)?;
    Ok(multiplier(f, -mu))
}

/// Real-valued convenience wrapper around [`frac_diff`].
pub fn frac_diff_real(lambda: f64, f: &[f64]) -> Result<Vec<f64>> {
    let c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(frac_diff(lambda, &c)?.iter().map(|z| z.re).collect())
}

/// Real-valued convenience wrapper around [`frac_int`].
pub fn frac_int_real(mu: f64, f: &[f64]) -> Result<Vec<f64>> {
    let c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(frac_int(mu, &c)?.iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::periodic_nodes;

    #[test]
    fn constants_are_fixed() {
        let f = vec![2.5; 16];
        let d = frac_diff_real(0.4, &f).unwrap();
        assert!(d.iter().all(|v| (v - 2.5).abs() < 1e-14));
    }

    #[test]
    fn cosine_mode() {
        let t = periodic_nodes(64);
        let f: Vec<f64> = t.iter().map(|t| (3.0 * t).cos()).collect();
        let d = frac_diff_real(0.5, &f).unwrap();
        for (x, y) in d.iter().zip(&t) {
            assert!((x - 3f64.sqrt() * (3.0 * y).cos()).abs() < 1e-13);
        }
        let back = frac_int_real(0.5, &d).unwrap();
        for (x, y) in back.iter().zip(&f) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_orders_leave_a_mode_factor() {
        let t = periodic_nodes(32);
        let f: Vec<f64> = t.iter().map(|t| (2.0 * t).sin()).collect();
        let g = frac_int_real(0.5, &frac_diff_real(0.3, &f).unwrap()).unwrap();
        let factor = 2f64.powf(-0.2);
        for (x, y) in g.iter().zip(&f) {
            assert!((x - factor * y).abs() < 1e-13);
        }
    }

    #[test]
    fn order_must_be_in_unit_interval() {
        assert!(matches!(frac_diff(1.0, &[]), Err(Error::InvalidOrder(_))));
        assert!(matches!(frac_int(0.0, &[]), Err(Error::InvalidOrder(_))));
    }
}
