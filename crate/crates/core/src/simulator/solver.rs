use super::grid::Propagator;
use crate::config::{floquet_angle, IncidenceSpec, ScreenGeometry};
use crate::embedding::{waveguide_map, CoefficientTable};
use crate::error::{Error, Result, Warning};
use crate::numerics::{C64, I};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GmresOptions {
    pub restart: usize,
    pub rel_tol: f64,
    pub max_matvecs: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions {
            restart: 100,
            rel_tol: 1e-10,
            max_matvecs: 8000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmresOutcome {
    pub x: Vec<C64>,
    pub matvecs: usize,
    pub rel_residual: f64,
    pub converged: bool,
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
pub fn gmres<F>(mut apply: F, rhs: &[C64], opts: &GmresOptions) -> GmresOutcome
where
    F: FnMut(&[C64], &mut [C64]),
{
    let n = rhs.len();
    let zero = C64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    let bnorm = norm(rhs);
    if bnorm == 0.0 {
        return GmresOutcome {
            x,
            matvecs: 0,
            rel_residual: 0.0,
            converged: true,
        };
    }
    let m = opts.restart.max(1);
    let mut matvecs = 0;
    let mut work = vec![zero; n];
    let mut rel;
    loop {
        apply(&x, &mut work);
        matvecs += 1;
        let r: Vec<C64> = rhs.iter().zip(&work).map(|(b, ax)| b - ax).collect();
        let beta = norm(&r);
        rel = beta / bnorm;
        if rel <= opts.rel_tol || matvecs >= opts.max_matvecs {
            break;
        }
        let mut basis: Vec<Vec<C64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut h = vec![vec![zero; m]; m + 1];
        let mut cs = vec![zero; m];
        let mut sn = vec![zero; m];
        let mut g = vec![zero; m + 1];
        g[0] = C64::new(beta, 0.0);
        let mut used = 0;
        for j in 0..m {
            let mut w = vec![zero; n];
            apply(&basis[j], &mut w);
            matvecs += 1;
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                h[i][j] = hij;
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
            }
            let hn = norm(&w);
            h[j + 1][j] = C64::new(hn, 0.0);
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i].conj() * h[i][j] + cs[i].conj() * h[i + 1][j];
                h[i][j] = t;
            }
            let (a, b) = (h[j][j], h[j + 1][j]);
            let den = (a.norm_sqr() + b.norm_sqr()).sqrt();
            if den == 0.0 {
                used = j;
                break;
            }
            cs[j] = (a / den).conj();
            sn[j] = (b / den).conj();
            h[j][j] = C64::new(den, 0.0);
            h[j + 1][j] = zero;
            g[j + 1] = -sn[j].conj() * g[j];
            g[j] = cs[j] * g[j];
            used = j + 1;
            rel = g[j + 1].norm() / bnorm;
            if rel <= opts.rel_tol || matvecs >= opts.max_matvecs || hn == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hn).collect());
        }
        let mut y = vec![zero; used];
        for i in (0..used).rev() {
            let mut s = g[i];
            for c in i + 1..used {
                s -= h[i][c] * y[c];
            }
            y[i] = s / h[i][i];
        }
        for (yi, v) in y.iter().zip(&basis) {
            for (xk, vk) in x.iter_mut().zip(v) {
                *xk += yi * vk;
            }
        }
        if matvecs >= opts.max_matvecs {
            apply(&x, &mut work);
            let r: Vec<C64> = rhs.iter().zip(&work).map(|(b, ax)| b - ax).collect();
            rel = norm(&r) / bnorm;
            break;
        }
    }
    GmresOutcome {
        x,
        matvecs,
        rel_residual: rel,
        converged: rel <= opts.rel_tol * 10.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SolverOptions {
    pub gmres: GmresOptions,
    /// Axial samples per period used for the Floquet projection.
    pub samples: usize,
    /// Probe lines are spread over `|y| / Y` in this band, below the sponge.
    pub probe_band: [f64; 2],
    /// Number of probe lines per side. With two or more, every order is fitted
    /// as an outgoing plus an incoming wave, so weak sponge reflections do not
    /// leak into the coefficients.
    pub probe_lines: usize,
    /// Highest order extracted.
    pub n_max: i64,
    /// Start and length of the roll-off of the incident jump inside the
    /// lower sponge, as fractions of the sponge width.
    pub incident_taper: [f64; 2],
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            gmres: GmresOptions::default(),
            samples: 256,
            probe_band: [0.35, 0.65],
            probe_lines: 8,
            n_max: 40,
            incident_taper: [0.0, 0.5],
        }
    }
}

/// Steady two-sheet field for one incidence slope.
#[derive(Debug, Clone)]
pub struct SolverResult {
    pub table: CoefficientTable,
    /// Edge values `(sheet 1*, sheet 2*)` at `x_0 - 0` and `x_1 - 0`.
    pub edge_values: [(C64, C64); 2],
    pub matvecs: usize,
    pub rel_residual: f64,
    /// Largest incoming-to-outgoing amplitude ratio among the propagating
    /// orders up to 5, as seen by the probe fit.
    pub probe_reflection: f64,
    pub warnings: Vec<Warning>,
}

struct PeriodMap<'a> {
    prop: &'a mut Propagator,
    geometry: ScreenGeometry,
    k: C64,
    theta: C64,
    /// Incident profile on the lower half, tapered inside the sponge.
    incident: Vec<C64>,
    floquet: C64,
}

impl PeriodMap<'_> {
    fn incident_at(&self, x: f64) -> C64 {
        (-I * self.k * x * self.theta * self.theta / 2.0).exp()
    }

    /// Cut at `x`: `u1+ = u2- - u_in`, `u2+ = u1- + u_in` on `y < 0`.
    fn cut(&self, u1: &mut [C64], u2: &mut [C64], x: f64, inhomogeneous: bool) {
        let half = u1.len() / 2;
        let ph = self.incident_at(x);
        for j in 0..half {
            let j_in = if inhomogeneous { ph * self.incident[j] } else { C64::new(0.0, 0.0) };
            let (a, b) = (u1[j], u2[j]);
            u1[j] = b - j_in;
            u2[j] = a + j_in;
        }
    }

    fn period(&mut self, u1: &mut [C64], u2: &mut [C64], inhomogeneous: bool) {
        let (b, q) = (self.geometry.b, self.geometry.gap());
        self.cut(u1, u2, 0.0, inhomogeneous);
        self.prop.propagate(u1, b);
        self.prop.propagate(u2, b);
        self.cut(u1, u2, b, inhomogeneous);
        self.prop.propagate(u1, q);
        self.prop.propagate(u2, q);
        for v in u1.iter_mut().chain(u2.iter_mut()) {
            *v *= self.floquet;
        }
    }
}

/// Solves for the quasi-periodic scattered field on both sheets and projects
/// it onto Floquet orders `n_min..=opts.n_max`.
pub fn solve_quasi_periodic(
    prop: &mut Propagator,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
    n_min: i64,
    opts: &SolverOptions,
) -> Result<SolverResult> {
    let grid = prop.grid.clone();
    if spec.medium.absorption <= 0.0 {
        return Err(Error::Config("the solver needs a positive absorption".into()));
    }
    if (grid.k - spec.k()).norm() > 1e-12 * grid.k.norm() {
        return Err(Error::Config("propagator wavenumber differs from the incidence".into()));
    }
    let n = grid.n;
    let k = spec.k();
    let theta = spec.theta();
    let width = grid.spec.sponge_fraction * grid.spec.half_width;
    let start = grid.spec.half_width - width;
    let incident: Vec<C64> = grid
        .y
        .iter()
        .map(|&y| {
            let t0 = start + opts.incident_taper[0] * width;
            let taper = if y < -t0 {
                let s = ((-y - t0) / (opts.incident_taper[1] * width)).clamp(0.0, 1.0);
                (PI / 2.0 * s).cos().powi(2)
            } else {
                1.0
            };
            (-I * k * theta * y).exp() * taper
        })
        .collect();
    let floquet = (I * k * geometry.a * theta * theta / 2.0).exp();
    let mut map = PeriodMap {
        prop,
        geometry: *geometry,
        k,
        theta,
        incident,
        floquet,
    };

    let zero = C64::new(0.0, 0.0);
    let mut f1 = vec![zero; n];
    let mut f2 = vec![zero; n];
    map.period(&mut f1, &mut f2, true);
    let rhs: Vec<C64> = f1.into_iter().chain(f2).collect();
    let out = gmres(
        |v, out| {
            let (mut a1, mut a2) = (v[..n].to_vec(), v[n..].to_vec());
            map.period(&mut a1, &mut a2, false);
            for j in 0..n {
                out[j] = v[j] - a1[j];
                out[n + j] = v[n + j] - a2[j];
            }
        },
        &rhs,
        &opts.gmres,
    );
    let mut warnings = Vec::new();
    if !out.converged {
        if out.rel_residual > 1e-6 {
            return Err(Error::NoConvergence {
                op: "solve_quasi_periodic",
                estimate: f64::NAN,
                error: out.rel_residual,
            });
        }
        warnings.push(Warning::new(
            "gmres_tolerance",
            format!("GMRES stopped at relative residual {:.2e}", out.rel_residual),
        ));
    }
    let (mut u1, mut u2) = (out.x[..n].to_vec(), out.x[n..].to_vec());

    let c0 = (grid.value_at_axis(&u1) + 1.0, grid.value_at_axis(&u2));
    let lines = opts.probe_lines.max(1);
    let [lo, hi] = opts.probe_band;
    if !(0.0 < lo && lo <= hi && hi < 1.0 - grid.spec.sponge_fraction + 1e-12) {
        return Err(Error::Config("probe band must lie inside the sponge-free region".into()));
    }
    let heights: Vec<usize> = (0..lines)
        .map(|i| {
            let f = if lines == 1 { hi } else { lo + (hi - lo) * i as f64 / (lines - 1) as f64 };
            grid.node_near(f * grid.spec.half_width)
        })
        .collect();
    let y_up: Vec<f64> = heights.iter().map(|&j| grid.y[j]).collect();
    // Mirror nodes: y_{N-1-j} = -y_j.
    let lower: Vec<usize> = heights.iter().map(|&j| n - 1 - j).collect();
    let (a, b) = (geometry.a, geometry.b);
    let m = opts.samples;
    // rec[i][channel][line]
    let mut rec: Vec<(f64, Vec<[C64; 4]>)> = Vec::with_capacity(m);
    let mut c1 = None;
    map.cut(&mut u1, &mut u2, 0.0, true);
    let mut x = 0.0;
    for i in 0..m {
        let xj = (i as f64 + 0.5) * a / m as f64;
        if x < b && b <= xj {
            map.prop.propagate(&mut u1, b - x);
            map.prop.propagate(&mut u2, b - x);
            x = b;
            c1 = Some((grid.value_at_axis(&u1) + map.incident_at(b), grid.value_at_axis(&u2)));
            map.cut(&mut u1, &mut u2, b, true);
        }
        map.prop.propagate(&mut u1, xj - x);
        map.prop.propagate(&mut u2, xj - x);
        x = xj;
        let row = heights
            .iter()
            .zip(&lower)
            .map(|(&jp, &jm)| {
                let u_in = map.incident_at(xj) * (-I * k * theta * grid.y[jm]).exp();
                let (s1, s2) = if xj < b {
                    (u2[jm], u1[jm] + u_in)
                } else {
                    (u1[jm] + u_in, u2[jm])
                };
                [u1[jp], u2[jp], s1, s2]
            })
            .collect();
        rec.push((xj, row));
    }
    let c1 = c1.ok_or_else(|| Error::Resolution("no sample beyond the screen end".into()))?;

    let mut table = CoefficientTable {
        n_min,
        n_max: opts.n_max,
        psi: Vec::new(),
        r1: Vec::new(),
        t1: Vec::new(),
        r2: Vec::new(),
        t2: Vec::new(),
        twg: Vec::new(),
        rwg: Vec::new(),
        mode_index: Vec::new(),
    };
    let mut dropped = 0;
    let mut reflection: f64 = 0.0;
    let nan = C64::new(f64::NAN, f64::NAN);
    for order in n_min..=opts.n_max {
        let psi = floquet_angle(order, spec, geometry).value;
        let mut co = vec![[zero; 4]; lines];
        for (xj, row) in &rec {
            let ph = (I * k * xj * theta * theta / 2.0 + I * 2.0 * PI * order as f64 * xj / a).exp();
            for (acc, s) in co.iter_mut().zip(row) {
                for c in 0..4 {
                    acc[c] += s[c] * ph / m as f64;
                }
            }
        }
        // Outgoing and incoming y-dependence on the upper lines; on the lower
        // lines (at -y) the roles swap, which gives the same functions of y.
        let out: Vec<C64> = y_up.iter().map(|&y| (I * k * psi * y).exp()).collect();
        let inc: Vec<C64> = y_up.iter().map(|&y| (-I * k * psi * y).exp()).collect();
        let propagating = psi.re > 10.0 * psi.im.abs();
        let weakest = out.iter().map(|f| f.norm()).fold(f64::INFINITY, f64::min);
        table.psi.push(psi);
        table.mode_index.push(spec.mode_index as i64 - 2 * order);
        if weakest < 1e-8 {
            dropped += 1;
            for col in [&mut table.r1, &mut table.r2, &mut table.t1, &mut table.t2] {
                col.push(nan);
            }
            continue;
        }
        let mut vals = [zero; 4];
        for c in 0..4 {
            let data: Vec<C64> = co.iter().map(|v| v[c]).collect();
            let (outgoing, incoming) = fit_waves(&out, &inc, &data, propagating && lines > 1);
            if order <= 5 && propagating {
                reflection = reflection.max(incoming.norm() / outgoing.norm());
            }
            vals[c] = outgoing;
        }
        table.r1.push(vals[0]);
        table.r2.push(vals[1]);
        table.t1.push(vals[2]);
        table.t2.push(vals[3]);
    }
    if dropped > 0 {
        warnings.push(Warning::new(
            "evanescent_excluded",
            format!("{dropped} orders too weak at the probe lines were left as NaN"),
        ));
    }
    waveguide_map(&mut table, geometry);
    Ok(SolverResult {
        table,
        edge_values: [c0, c1],
        matvecs: out.matvecs,
        rel_residual: out.rel_residual,
        probe_reflection: reflection,
        warnings,
    })
}

/// Least-squares amplitudes of `data = A out + B inc`; with `two = false`
/// only `A` is fitted.
fn fit_waves(out: &[C64], inc: &[C64], data: &[C64], two: bool) -> (C64, C64) {
    let zero = C64::new(0.0, 0.0);
    let dot = |f: &[C64], g: &[C64]| f.iter().zip(g).map(|(a, b)| a.conj() * b).sum::<C64>();
    let ff = dot(out, out);
    if two {
        let gg = dot(inc, inc);
        let fg = dot(out, inc);
        let det = ff * gg - fg * fg.conj();
        if det.norm() > 1e-6 * (ff * gg).norm() {
            let fd = dot(out, data);
            let gd = dot(inc, data);
            return ((gg * fd - fg * gd) / det, (ff * gd - fg.conj() * fd) / det);
        }
    }
    (dot(out, data) / ff, zero)
}

/// Reciprocity residuals: `C_{0,1*} - C_{0,2*} - V1(theta)` and
/// `C_{1,1*} - C_{1,2*} - e^{-ikb theta^2/2} V0(theta)`, relative to the
/// directivities supplied.
pub fn reciprocity_defect(
    result: &SolverResult,
    v0: C64,
    v1: C64,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> [f64; 2] {
    let [c0, c1] = result.edge_values;
    let th = spec.theta();
    let e = (-I * spec.k() * geometry.b * th * th / 2.0).exp();
    [
        ((c0.0 - c0.1) - v1).norm() / v1.norm(),
        ((c1.0 - c1.1) - e * v0).norm() / v0.norm(),
    ]
}
