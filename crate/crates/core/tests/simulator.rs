use screenwave::config::{IncidenceSpec, ScreenGeometry, SimulatorSettings};
use screenwave::simulator::*;
use screenwave::C64;

fn setup(eps: f64, theta: f64, abs: f64, half_width: f64) -> (IncidenceSpec, ScreenGeometry, Propagator) {
    let g = ScreenGeometry::from_epsilon(eps).unwrap();
    let s = IncidenceSpec::new(theta, 31, 100.0, abs, &g).unwrap();
    let settings = SimulatorSettings { half_width, steps_per_width: 8.0, cells: 64 };
    let p = Propagator::new(grid_for(&s, &g, &settings).unwrap());
    (s, g, p)
}

#[test]
fn edge_functions_keep_their_parity_over_64_cells() {
    let (_, g, mut p) = setup(0.2, 0.05, 1e-3, 10.0);
    let opts = EdgeMarchOptions { cells: 64, ..EdgeMarchOptions::default() };
    for l in [0, 1] {
        let run = edge_green_march(&mut p, l, &g, &opts).unwrap();
        assert!(run.parity_defect < 1e-10, "l={l}: {}", run.parity_defect);
        // the first gap of w_1 is the closed-form head term
        assert_eq!(run.gaps.len(), 64 - l as usize);
    }
}

#[test]
fn source_offset_does_not_matter() {
    let (s, g, mut p) = setup(0.2, 0.05, 1e-3, 10.0);
    let value = |p: &mut Propagator, sigma: f64| {
        let opts = EdgeMarchOptions { cells: 32, sigma, ..EdgeMarchOptions::default() };
        let run = edge_green_march(p, 0, &g, &opts).unwrap();
        directivity_numeric(&run, s.theta()).unwrap().value
    };
    let a = value(&mut p, 1e-3);
    let b = value(&mut p, 1e-2);
    // only the sponge splitting sees the different step partition
    assert!((a - b).norm() / a.norm() < 1e-5, "{a} vs {b}");
}

#[test]
fn march_rejects_bad_options() {
    let (_, g, mut p) = setup(0.2, 0.05, 1e-3, 10.0);
    assert!(edge_green_march(&mut p, 2, &g, &EdgeMarchOptions::default()).is_err());
    let few = EdgeMarchOptions { cells: 4, ..EdgeMarchOptions::default() };
    assert!(edge_green_march(&mut p, 0, &g, &few).is_err());
}

#[test]
fn gmres_solves_a_nonnormal_system() {
    let n = 60;
    let apply = |x: &[C64], y: &mut [C64]| {
        for i in 0..n {
            let mut s = x[i] * C64::new(2.0 + i as f64 / n as f64, 0.3);
            if i + 1 < n {
                s += 0.5 * x[i + 1];
            }
            if i > 0 {
                s -= C64::new(0.0, 0.4) * x[i - 1];
            }
            y[i] = s;
        }
    };
    let truth: Vec<C64> = (0..n).map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
    let mut rhs = vec![C64::new(0.0, 0.0); n];
    apply(&truth, &mut rhs);
    let out = gmres(apply, &rhs, &GmresOptions { restart: 10, rel_tol: 1e-12, max_matvecs: 1000 });
    assert!(out.converged);
    let err = out.x.iter().zip(&truth).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");
}

#[test]
fn solver_needs_absorption() {
    let (s, g, mut p) = setup(0.2, 0.05, 0.0, 10.0);
    assert!(solve_quasi_periodic(&mut p, &s, &g, 0, &SolverOptions::default()).is_err());
}

#[test]
fn solver_agrees_with_marched_directivities_at_a_wide_gap() {
    let (s, g, mut p) = setup(0.2, 0.05, 1e-3, 20.0);
    let runs = EdgeRuns::march(&mut p, &g, &EdgeMarchOptions { cells: 64, ..EdgeMarchOptions::default() }).unwrap();
    let opts = SolverOptions { n_max: 6, samples: 128, ..SolverOptions::default() };
    let solved = solve_quasi_periodic(&mut p, &s, &g, 0, &opts).unwrap();
    let t = &solved.table;
    let emb = runs.table(&s, &g, t.orders()).unwrap();
    for (i, n) in t.orders().enumerate() {
        assert!((t.r2[i] + t.r1[i]).norm() < 1e-9, "R2 identity at {n}");
        let t2 = if n == 0 { 1.0 - t.t1[i] } else { -t.t1[i] };
        assert!((t.t2[i] - t2).norm() < 1e-9, "T2 identity at {n}");
        if n <= 2 {
            assert!((t.r1[i] - emb.r1[i]).norm() / t.r1[i].norm() < 0.01, "R1 at {n}: {} vs {}", t.r1[i], emb.r1[i]);
            assert!((t.t1[i] - emb.t1[i]).norm() / t.t1[i].norm() < 0.01, "T1 at {n}: {} vs {}", t.t1[i], emb.t1[i]);
        }
    }
    let d = runs.set_at(s.theta_in, s.theta_in).unwrap();
    let rec = reciprocity_defect(&solved, d.v0, d.v1, &s, &g);
    assert!(rec[0] < 0.01 && rec[1] < 0.01, "{rec:?}");
}
