use proptest::prelude::*;
use screenwave::asymptotics::{directivity_set, extended_asymptotic};
use screenwave::config::{IncidenceSpec, RegimeScales, ScreenGeometry};
use screenwave::embedding::*;
use screenwave::{BranchRule, C64};

fn table(eps: f64, theta: f64) -> (CoefficientTable, IncidenceSpec, ScreenGeometry) {
    let g = ScreenGeometry::from_epsilon(eps).unwrap();
    let s = IncidenceSpec::new(theta, 31, 100.0, 0.0, &g).unwrap();
    let (t, _) = asymptotic_table(&s, &g, default_window(&s), BranchRule::Principal).unwrap();
    (t, s, g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sheet_and_waveguide_identities(eps in 0.005f64..0.2, log_theta in -4.0f64..-0.6) {
        let (t, _, g) = table(eps, 10f64.powf(log_theta));
        for (i, n) in t.orders().enumerate() {
            prop_assert!((t.r2[i] + t.r1[i]).norm() <= 1e-12);
            if n == 0 {
                prop_assert!((t.t2[i] - (1.0 - t.t1[i])).norm() <= 1e-12);
                prop_assert!((t.twg[i] - (t.t1[i] - t.r1[i])).norm() <= 1e-12);
            } else {
                prop_assert!((t.t2[i] + t.t1[i]).norm() <= 1e-12);
                prop_assert!((t.twg[i] + t.rwg[i]).norm() <= 1e-12);
                let phase = C64::from_polar(1.0, std::f64::consts::PI * n as f64 * g.epsilon());
                prop_assert!((t.twg[i] - phase * (t.t1[i] + t.r2[i])).norm() <= 1e-12);
            }
            prop_assert_eq!(t.mode_index[i], 31 - 2 * n);
        }
    }
}

#[test]
fn closed_limit_at_small_angles() {
    let xc = RegimeScales::new(100.0, &ScreenGeometry::from_epsilon(0.05).unwrap()).crossover;
    let (t, _, _) = table(0.05, xc / 200.0);
    let i = t.index(0).unwrap();
    assert!((t.r1[i] + 0.5).norm() < 2e-2);
    assert!((t.t1[i] - 0.5).norm() < 2e-2);
}

#[test]
fn transmission_and_reflection_regimes() {
    let xc = RegimeScales::new(100.0, &ScreenGeometry::from_epsilon(0.05).unwrap()).crossover;
    let (low, _, _) = table(0.05, xc / 20.0);
    let (high, _, _) = table(0.05, 10.0 * xc);
    let (i, j) = (low.index(0).unwrap(), high.index(0).unwrap());
    assert!(low.twg[i].norm() >= 0.95 && low.rwg[i].norm() <= 0.10);
    assert!(high.rwg[j].norm() >= 0.85 && high.twg[j].norm() <= 0.2);
}

#[test]
fn reflection_grows_as_the_gap_closes() {
    let mut last = 0.0;
    for eps in [0.1, 0.05, 0.01, 0.002] {
        let (t, _, _) = table(eps, 0.1);
        let r = t.rwg[t.index(0).unwrap()].norm();
        assert!(r > last, "eps={eps}: |Rwg0| = {r}");
        last = r;
    }
}

#[test]
fn difference_quotient_reproduces_zeroth_transmission() {
    let g = ScreenGeometry::from_epsilon(0.05).unwrap();
    let s = IncidenceSpec::new(0.045, 31, 100.0, 0.0, &g).unwrap();
    let (d, _) = directivity_set(s.theta_in, &s, &g).unwrap();
    let exact = transmission_zero(&d, &s, &g).unwrap();
    let fd = transmission_zero_difference(|l, th, ph| extended_asymptotic(l, th, ph, &s, &g), 1e-6, &s, &g).unwrap();
    assert!((fd - exact).norm() / exact.norm() < 1e-6, "{fd} vs {exact}");
}

#[test]
fn closed_screen_passes_everything_through_sheet_two() {
    let g = ScreenGeometry { a: 1.0, b: 1.0 };
    let s = IncidenceSpec::new(0.05, 31, 100.0, 0.0, &g).unwrap();
    let t = closed_screen_table(&s, &g, default_window(&s));
    let i = t.index(0).unwrap();
    assert_eq!(t.rwg[i], C64::new(1.0, 0.0));
    assert_eq!(t.twg[i], C64::new(0.0, 0.0));
    assert!(flux_audit(&t, &s).defect.abs() < 1e-15);
}

#[test]
fn restrict_and_extrapolated_audit() {
    let (t, s, _) = table(0.05, 0.045);
    let sub = t.restrict(0..=3).unwrap();
    assert_eq!(sub.orders(), 0..=3);
    assert_eq!(sub.r1[1], t.r1[t.index(1).unwrap()]);
    assert!(t.restrict(100..=200).is_err());
    assert!(flux_audit_extrapolated(&sub, &s, 40).is_err());
}

#[test]
fn window_starts_below_the_lowest_propagating_order() {
    let g = ScreenGeometry::from_epsilon(0.05).unwrap();
    let s = IncidenceSpec::new(0.3, 31, 100.0, 0.0, &g).unwrap();
    let w = default_window(&s);
    // psi_n is real for n >= -0.716..., so order 0 is the lowest propagating one
    assert_eq!(*w.start(), -4);
    assert_eq!(*w.end(), 15);
}
