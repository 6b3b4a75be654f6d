use proptest::prelude::*;
use screenwave::numerics::{green_complex, green_function, quad_ray, sqrt_upper, MediumParams, QuadOptions, C64, I};
use std::f64::consts::PI;

/// Integral over the real line, moved onto `y0 + e^{i pi/4} t` where
/// Fresnel phases become Gaussians.
fn line_integral(f: impl Fn(C64) -> C64, y0: f64, scale: f64) -> C64 {
    let opts = QuadOptions { rel_tol: 1e-12, ..QuadOptions::default() };
    let up = quad_ray(|z| f(z + y0), PI / 4.0, scale, &opts).unwrap();
    let down = quad_ray(|z| f(z + y0), PI / 4.0 + PI, scale, &opts).unwrap();
    up - down
}

#[test]
fn green_function_carries_unit_mass() {
    for (k, x) in [(100.0, 0.3), (100.0, 2.0), (40.0, 1.0)] {
        let medium = MediumParams::new(k, 0.0).unwrap();
        let mass = line_integral(|y| green_complex(x, y, medium.k()), 0.0, (x / k).sqrt());
        assert!((mass - 1.0).norm() < 1e-9, "k={k} x={x} mass={mass}");
    }
}

#[test]
fn convolution_of_green_functions_is_a_semigroup() {
    let medium = MediumParams::new(100.0, 0.0).unwrap();
    let k = medium.k();
    let (x1, x2) = (0.4, 0.7);
    for y in [0.0, 0.05, -0.2] {
        let centre = y * x2 / (x1 + x2);
        let lhs = line_integral(|yp| green_complex(x1, y - yp, k) * green_complex(x2, yp, k), centre, 0.05);
        let rhs = green_function(x1 + x2, y, &medium).unwrap();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-8, "y={y}: {lhs} vs {rhs}");
    }
}

#[test]
fn green_function_rejects_the_source_plane() {
    let medium = MediumParams::new(100.0, 0.0).unwrap();
    assert!(green_function(0.0, 0.1, &medium).is_err());
    assert!(green_function(-1.0, 0.1, &medium).is_err());
}

#[test]
fn absorbing_angle_keeps_k_theta_squared_real() {
    let m = MediumParams::new(100.0, 1e-3).unwrap();
    let t = m.absorbing_angle(0.045);
    let p = m.k() * t * t;
    assert!(p.im.abs() < 1e-15 * p.norm());
    assert!((p.re - 100.0 * 0.045 * 0.045).abs() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn sqrt_upper_squares_back_with_decaying_phase(re in -10.0f64..10.0, im in -10.0f64..10.0, kr in 1.0f64..200.0, abs in 0.0f64..0.05) {
        let z = C64::new(re, im);
        let k = C64::new(kr, kr * abs);
        let w = sqrt_upper(z, k);
        prop_assert!((w * w - z).norm() <= 1e-12 * (1.0 + z.norm()));
        prop_assert!((k * w).im >= -1e-12 * (k * w).norm());
        // the plane wave e^{i k w y} does not grow as y increases
        prop_assert!((I * k * w).re <= 1e-9 * (k * w).norm());
    }
}
