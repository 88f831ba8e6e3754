use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use reprokernel::geometry::{Curve, DefiningDomain, PlanarContour};
use reprokernel::kerzman_stein::{cauchy_operator, frac_diff, frac_int, ks_operator};
use reprokernel::planar_kernels::{build_onb, cauchy_reproduce, kernel_sum, HoloBasis, Space};
use reprokernel::several_complex::{
    hefer_linear, henkin_phi_convex, BallWeight, BochnerMartinelliWeight, CfWeight, HenkinWeight,
};
use reprokernel::testfn::TestFunction;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn domain(kind: u8) -> DefiningDomain {
    if kind == 0 {
        DefiningDomain::ball(2)
    } else {
        DefiningDomain::egg(kind as u32 + 1).unwrap()
    }
}

prop_compose! {
    fn direction()(a in -1.0..1.0f64, b in -1.0..1.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64)
        -> Vec<Complex64>
    {
        let v = vec![c(a, b), c(x, y)];
        if v.iter().map(|z| z.norm_sqr()).sum::<f64>() < 1e-6 {
            vec![c(1.0, 0.0), c(0.0, 0.0)]
        } else {
            v
        }
    }
}

prop_compose! {
    /// A boundary point and an interior point of the same domain.
    fn boundary_pair(kind: u8)(d in direction(), e in direction(), s in 0.0..0.9f64)
        -> (Vec<Complex64>, Vec<Complex64>)
    {
        let dom = domain(kind);
        let zeta = dom.radial_boundary_point(&d);
        let z: Vec<Complex64> = dom.radial_boundary_point(&e).iter().map(|x| s * x).collect();
        (zeta, z)
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn bergman_basis() -> &'static (PlanarContour, HoloBasis) {
    static BASIS: OnceLock<(PlanarContour, HoloBasis)> = OnceLock::new();
    BASIS.get_or_init(|| {
        let contour = PlanarContour::arclength(Curve::Ellipse { a: 1.2, b: 1.0 }, 256).unwrap();
        let basis = build_onb(&contour, 20, Space::Bergman).unwrap();
        (contour, basis)
    })
}

prop_compose! {
    fn disc_point(radius: f64)(r in 0.0..1.0f64, t in 0.0..(2.0 * PI)) -> Complex64 {
        Complex64::from_polar(radius * r.sqrt(), t)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tangent_basis_is_orthonormal_and_complex_tangent(kind in 0u8..3, d in direction()) {
        let dom = domain(kind);
        let p = dom.radial_boundary_point(&d);
        let basis = dom.complex_tangent_basis(&p).unwrap();
        let grad = dom.d_rho(&p);
        prop_assert_eq!(basis.len(), 1);
        for (i, u) in basis.iter().enumerate() {
            let along: Complex64 = grad.iter().zip(u).map(|(g, x)| g * x).sum();
            prop_assert!(along.norm() < 1e-12);
            for (j, v) in basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((inner(u, v) - target).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn winding_numbers(a in 0.0..0.25f64, k in 2u32..6, r in 0.0..1.0f64, t in 0.0..(2.0 * PI)) {
        let contour = PlanarContour::new(Curve::PerturbedCircle { amplitude: a, frequency: k }, 256).unwrap();
        let inside = Complex64::from_polar(0.9 * (1.0 - a) * r, t);
        let outside = Complex64::from_polar((1.0 + a) * (1.1 + r), t);
        prop_assert!((contour.winding_number(inside) - 1.0).abs() < 1e-6);
        prop_assert!(contour.winding_number(outside).abs() < 1e-6);
    }

    #[test]
    fn kernel_sum_is_hermitian(z in disc_point(0.8), w in disc_point(0.8)) {
        let (_, basis) = bergman_basis();
        let a = kernel_sum(basis, z, w);
        let b = kernel_sum(basis, w, z);
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
        prop_assert!(kernel_sum(basis, z, z).im.abs() < 1e-12 * kernel_sum(basis, z, z).re.max(1.0));
    }

    #[test]
    fn diagonal_kernel_grows_with_basis_size(z in disc_point(0.8)) {
        let (_, basis) = bergman_basis();
        let values = basis.eval_all(z);
        let mut partial = 0.0;
        for v in values {
            let next = partial + v.norm_sqr();
            prop_assert!(next >= partial);
            partial = next;
        }
        prop_assert!((partial - kernel_sum(basis, z, z).re).abs() <= 1e-12 * partial.max(1.0));
    }

    #[test]
    fn point_evaluation_is_bounded_by_the_kernel(
        coeffs in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 20),
        z in disc_point(0.8),
    ) {
        let (_, basis) = bergman_basis();
        let coeffs: Vec<Complex64> = coeffs.into_iter().map(|(a, b)| c(a, b)).collect();
        let norm2: f64 = coeffs.iter().map(|x| x.norm_sqr()).sum();
        let value: Complex64 = coeffs.iter().zip(basis.eval_all(z)).map(|(a, p)| a * p).sum();
        let k = kernel_sum(basis, z, z).re;
        prop_assert!(value.norm_sqr() <= norm2 * k * (1.0 + 1e-12));
    }

    #[test]
    fn weights_are_normalized(kind in 0u8..3, (zeta, z) in boundary_pair(0)) {
        let dom = domain(kind);
        let zeta_k = dom.radial_boundary_point(&zeta);
        let z_k: Vec<Complex64> = z.iter().map(|x| 0.9 * x).collect();
        prop_assume!(dom.rho(&z_k) < -1e-3);
        prop_assert!(BochnerMartinelliWeight.normalization_residual(&z_k, &zeta_k) < 1e-10);
        prop_assert!(HenkinWeight::new(dom.clone()).normalization_residual(&z_k, &zeta_k) < 1e-10);
        if kind == 0 {
            prop_assert!(BallWeight.normalization_residual(&z_k, &zeta_k) < 1e-10);
        }
    }

    #[test]
    fn hefer_decomposes_the_singular_function(kind in 0u8..3, d in direction(), z in direction()) {
        let dom = domain(kind);
        let zeta = dom.radial_boundary_point(&d);
        let p = hefer_linear(&dom, &z, &zeta).unwrap();
        let s: Complex64 = p.iter().zip(zeta.iter().zip(&z)).map(|(p, (a, b))| p * (a - b)).sum();
        let phi = henkin_phi_convex(&dom, &z, &zeta).unwrap();
        prop_assert!((s - phi).norm() < 1e-12);
    }

    #[test]
    fn singular_function_is_negative_inside((zeta, z) in boundary_pair(2)) {
        let egg = domain(2);
        prop_assume!(egg.rho(&z) < -1e-6);
        prop_assert!(henkin_phi_convex(&egg, &z, &zeta).unwrap().re < 0.0);
    }

    #[test]
    fn kerzman_stein_operator_is_skew_adjoint(a in 0.0..0.2f64, k in 2u32..5) {
        let contour = PlanarContour::arclength(Curve::PerturbedCircle { amplitude: a, frequency: k }, 64).unwrap();
        let h = cauchy_operator(&contour).unwrap();
        let ks = ks_operator(&h);
        prop_assert!(ks.adjoint().add(&ks).norm() < 1e-12);
        let ones = vec![c(1.0, 0.0); 64];
        let h1 = h.apply(&ones).unwrap();
        prop_assert!(h1.iter().all(|v| (v - 1.0).norm() < 1e-12));
    }

    #[test]
    fn fractional_orders_compose(
        lambda in 0.05..0.45f64,
        mu in 0.05..0.45f64,
        f in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 64),
    ) {
        let f: Vec<Complex64> = f.into_iter().map(|(a, b)| c(a, b)).collect();
        let two = frac_diff(lambda, &frac_diff(mu, &f).unwrap()).unwrap();
        let one = frac_diff(lambda + mu, &f).unwrap();
        let scale = f.iter().map(|x| x.norm()).fold(0.0, f64::max) * 64f64.powf(lambda + mu);
        for (x, y) in two.iter().zip(&one) {
            prop_assert!((x - y).norm() < 1e-12 * scale.max(1.0));
        }
        let back = frac_int(lambda, &frac_diff(lambda, &f).unwrap()).unwrap();
        for (x, y) in back.iter().zip(&f) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn cauchy_reproduces_holomorphic_polynomials(k in 0u32..8, z in disc_point(0.8)) {
        let contour = PlanarContour::arclength(Curve::Ellipse { a: 1.2, b: 1.0 }, 256).unwrap();
        let samples = contour.sample(|p| p.powu(k));
        let v = cauchy_reproduce(&contour, &samples, z).unwrap();
        prop_assert!((v - z.powu(k)).norm() < 1e-10);
    }

    #[test]
    fn test_function_derivatives(a in 0u32..4, b in 0u32..4, re in -1.0..1.0f64, im in -1.0..1.0f64) {
        let f = TestFunction::parse(&format!("z1^{a}*conj(z1)^{b}")).unwrap();
        let z = [c(re, im)];
        let expect = if b == 0 {
            c(0.0, 0.0)
        } else {
            b as f64 * z[0].powu(a) * z[0].conj().powu(b - 1)
        };
        prop_assert!((f.dbar(&z)[0] - expect).norm() < 1e-13);
        prop_assert_eq!(f.is_holomorphic(), b == 0);
    }
}
