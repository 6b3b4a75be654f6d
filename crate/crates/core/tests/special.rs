use screenwave::special::{gamma_half, polylog, polylog_asymptotic_halforder, polylog_series, zeta, AsymptoticTerms, PolylogOrder};
use screenwave::C64;
use std::f64::consts::PI;

// (z, Li_{1/2}(z), Li_{3/2}(z)), from an arbitrary-precision reference
fn reference() -> Vec<(C64, C64, C64)> {
    let c = C64::new;
    vec![
        (c(0.3, 0.4), c(0.16314618349081769, 0.56247915542729614), c(0.24715013759786081, 0.48592967194770628)),
        (c(0.6, -0.7), c(-0.025141659241331917, -1.1037508171537115), c(0.36741207703337437, -0.97872900455336708)),
        (C64::from_polar(1.0, 0.5), c(0.31529661575870839, 1.6683324929967654), c(0.86592952276498824, 1.0428086988788313)),
        (C64::from_polar(1.0, 3.0), c(-0.60370734667240341, 0.053861673414814715), c(-0.76133529018598283, 0.085593008226052014)),
        (C64::from_polar(0.999, 0.01), c(11.649369149274803, 11.861278242956242), c(2.3503474387509646, 0.22385024207908676)),
        (c(-1.0, 0.0), c(-0.60489864342163037, 0.0), c(-0.76514702462540795, 0.0)),
    ]
}

#[test]
fn polylog_matches_reference_values() {
    for (z, half, three) in reference() {
        let a = polylog(PolylogOrder::Half, z).unwrap();
        let b = polylog(PolylogOrder::ThreeHalves, z).unwrap();
        assert!((a - half).norm() < 1e-10 * half.norm().max(1.0), "Li_1/2({z}) = {a}, want {half}");
        assert!((b - three).norm() < 1e-10 * three.norm().max(1.0), "Li_3/2({z}) = {b}, want {three}");
    }
}

#[test]
fn zeta_values() {
    assert!((zeta(1.5).unwrap() - 2.612_375_348_685_488_3).abs() < 1e-12);
    assert!((zeta(0.5).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-12);
    assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-13);
    assert!((zeta(-0.5).unwrap() + 0.207_886_224_977_354_57).abs() < 1e-12);
    assert!(zeta(1.0).is_err());
}

#[test]
fn gamma_at_half_integers() {
    assert!((gamma_half(1).unwrap() - PI.sqrt()).abs() < 1e-15);
    assert!((gamma_half(-1).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-14);
    assert!((gamma_half(10).unwrap() - 24.0).abs() < 1e-12);
    assert!(gamma_half(0).is_err());
}

#[test]
fn li_three_halves_at_one_is_zeta() {
    let v = polylog(PolylogOrder::ThreeHalves, C64::new(1.0, 0.0)).unwrap();
    assert!((v.re - 2.612_375_348_685_488_3).abs() < 1e-9 && v.im.abs() < 1e-12);
    assert!(polylog(PolylogOrder::Half, C64::new(1.0, 0.0)).is_err());
}

#[test]
fn series_agrees_inside_the_disk() {
    let z = C64::new(0.2, -0.3);
    let s = polylog_series(0.5, z, 1e-16, 10_000);
    assert!((s - polylog(PolylogOrder::Half, z).unwrap()).norm() < 1e-13);
}

#[test]
fn half_order_asymptotics_along_three_rays() {
    for arg in [PI / 2.0, 0.75 * PI, PI] {
        for r in [1e-4, 1e-6] {
            let mu = C64::from_polar(r, arg);
            let exact = polylog(PolylogOrder::Half, mu.exp()).unwrap();
            let with_const = polylog_asymptotic_halforder(mu, AsymptoticTerms::WithConstant).unwrap();
            let leading = polylog_asymptotic_halforder(mu, AsymptoticTerms::Leading).unwrap();
            let rel = (with_const - exact).norm() / exact.norm();
            assert!(rel < 1e-3, "arg={arg} r={r} rel={rel}");
            assert!((leading - exact).norm() >= (with_const - exact).norm());
        }
    }
}

#[test]
fn half_order_asymptotics_reject_bad_arguments() {
    assert!(polylog_asymptotic_halforder(C64::new(0.0, 0.0), AsymptoticTerms::Leading).is_err());
    assert!(polylog_asymptotic_halforder(C64::new(0.5, 0.0), AsymptoticTerms::Leading).is_err());
    assert!(polylog_asymptotic_halforder(C64::new(1e-5, -1e-5), AsymptoticTerms::Leading).is_err());
}
