use screenwave::asymptotics::*;
use screenwave::config::{IncidenceSpec, ScreenGeometry};
use screenwave::{MediumParams, C64};

fn reference_point(absorption: f64) -> (IncidenceSpec, ScreenGeometry) {
    let g = ScreenGeometry::from_epsilon(0.05).unwrap();
    (IncidenceSpec::new(0.045, 31, 100.0, absorption, &g).unwrap(), g)
}

#[test]
fn segment_strengths_reference_values() {
    let h = segment_strengths(0.05, &MediumParams::new(100.0, 0.0).unwrap());
    let hd = C64::new(-0.025_231_325_220_201_6, -0.025_231_325_220_201_6);
    let hn = C64::new(-4.205_220_870_033_60e-6, 4.205_220_870_033_60e-6);
    assert!((h.h_d - hd).norm() < 1e-15);
    assert!((h.h_n - hn).norm() < 1e-18);
}

#[test]
fn segment_quadrature_matches_closed_forms() {
    for (q, abs) in [(0.05, 0.0), (0.02, 1e-3), (0.1, 0.01)] {
        let m = MediumParams::new(100.0, abs).unwrap();
        let exact = segment_strengths(q, &m);
        let quad = segment_strengths_quadrature(q, &m).unwrap();
        assert!((quad.h_d - exact.h_d).norm() / exact.h_d.norm() < 1e-6, "h_D q={q}");
        assert!((quad.h_n - exact.h_n).norm() / exact.h_n.norm() < 1e-6, "h_N q={q}");
    }
}

#[test]
fn directivity_reference_values() {
    let (s, g) = reference_point(0.0);
    let (v0, _) = v0_asymptotic(s.theta(), &s, &g).unwrap();
    assert!((v0 - C64::new(0.631_815_937_182_869_9, -0.260_464_067_575_225_6)).norm() < 1e-12);
    let slope = v1_slope(&s, &g);
    assert!((slope - C64::new(1.261_566_261_010_08, -1.261_566_261_010_08)).norm() < 1e-13);
    assert_eq!(v1_slope_with(&s, &g, BranchRule::Reflected), -slope);
}

#[test]
fn v0_follows_its_small_angle_limit() {
    let g = ScreenGeometry::from_epsilon(0.05).unwrap();
    for theta in [1e-5, 1e-6] {
        let s = IncidenceSpec::new(theta, 31, 100.0, 0.0, &g).unwrap();
        let (v0, _) = v0_asymptotic(s.theta(), &s, &g).unwrap();
        let lim = v0_small_theta(s.theta(), &s, &g);
        assert!((v0 - lim).norm() / lim.norm() < 0.05, "theta={theta}");
    }
}

#[test]
fn recursions_match_inverted_generating_functions() {
    let (s, g) = reference_point(0.0);
    for kind in [LatticeKind::Dirichlet, LatticeKind::Neumann] {
        let direct = recursion_coefficients(kind, 512, &s, &g);
        let inv = invert_generating_function(|p| Ok(lattice_sum(kind, p, &s, &g)?.chat), 512, 4096, 20.0 / 4096.0).unwrap();
        let err = direct.iter().zip(&inv).map(|(a, b)| (a - b).norm() / a.norm()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{kind:?}: {err}");
    }
}

#[test]
fn lattice_sum_rejects_growing_phases() {
    let (s, g) = reference_point(0.0);
    assert!(lattice_sum_dirichlet(C64::new(0.3, -0.1), &s, &g).is_err());
    assert!(invert_generating_function(|_| Ok(C64::new(0.0, 0.0)), 16, 16, 0.1).is_err());
}

#[test]
fn lambda_warning_appears_at_large_angles() {
    let g = ScreenGeometry::from_epsilon(0.05).unwrap();
    let small = IncidenceSpec::new(0.01, 31, 100.0, 0.0, &g).unwrap();
    let large = IncidenceSpec::new(1.0, 31, 100.0, 0.0, &g).unwrap();
    assert!(v0_asymptotic(small.theta(), &small, &g).unwrap().1.is_empty());
    assert_eq!(v0_asymptotic(large.theta(), &large, &g).unwrap().1[0].code, "lambda_one");
}
