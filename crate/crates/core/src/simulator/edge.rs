use super::grid::{apply_cut, FieldSlice, Propagator, SheetConvention};
use crate::config::ScreenGeometry;
use crate::error::{Error, Result};
use crate::numerics::{erf, gauss_legendre_unit, C64, I};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EdgeMarchOptions {
    /// Periods marched; each contributes one gap.
    pub cells: usize,
    /// Gauss-Legendre nodes per gap (in `t`, with `x = x_s + q t^2`).
    pub gauss_nodes: usize,
    /// Start offset of the source; the band-limited source is `G(sigma, y)`
    /// itself, so results do not depend on it beyond rounding.
    pub sigma: f64,
    /// Number of shore slices (`x_n + 0`) to keep.
    pub keep_slices: usize,
}

impl Default for EdgeMarchOptions {
    fn default() -> Self {
        EdgeMarchOptions {
            cells: 200,
            gauss_nodes: 12,
            sigma: 1e-3,
            keep_slices: 0,
        }
    }
}

/// Axis samples of one gap `(x_s, x_s + q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSamples {
    pub x_start: f64,
    pub x: Vec<f64>,
    pub value: Vec<C64>,
    /// `du/dy` at `y = 0+`, with the cut discontinuity subtracted.
    pub slope: Vec<C64>,
}

/// Result of marching the edge Green's function `w_l` through the lattice.
#[derive(Debug, Clone)]
pub struct EdgeGreenRun {
    pub l: u8,
    pub k: C64,
    pub geometry: ScreenGeometry,
    /// Quadrature weights in `x` (shared by all gaps).
    pub weights: Vec<f64>,
    pub gaps: Vec<GapSamples>,
    pub shore_slices: Vec<FieldSlice>,
    pub last: FieldSlice,
    /// Largest relative departure from the expected parity seen at gap starts.
    pub parity_defect: f64,
    /// Worst aliasing fraction seen at gap starts.
    pub aliasing: f64,
}

fn parity_defect(u: &[C64], odd: bool) -> f64 {
    let n = u.len();
    let s = if odd { 1.0 } else { -1.0 };
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..n {
        num += (u[j] + s * u[n - 1 - j]).norm_sqr();
        den += u[j].norm_sqr();
    }
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt() / 2.0
    }
}

/// `du/dy(0)` of a unit cut jump after propagating `x`, discrete minus exact.
/// Subtracting `J` times this from a sampled slope removes the part of the
/// error that the jump singularity puts into the axis difference formula.
fn jump_kernel(prop: &mut Propagator, x_nodes: &[f64]) -> Vec<C64> {
    let g = prop.grid.clone();
    let w = g.spec.half_width / 4.0;
    let mut u: Vec<C64> = g
        .y
        .iter()
        .map(|&y| C64::new(y.signum() * (-(y / w) * (y / w)).exp(), 0.0))
        .collect();
    let mut x = 0.0;
    let mut out = Vec::with_capacity(x_nodes.len());
    for &xn in x_nodes {
        prop.propagate(&mut u, xn - x);
        x = xn;
        let exact = 2.0 * (g.k / (2.0 * PI * I * xn)).sqrt();
        out.push(g.slope_at_axis(&u) - exact);
    }
    out
}

/// Marches `w_l` (source at `x_l`, `l` in {0, 1}) through `opts.cells`
/// periods, sampling the axis inside every gap.
pub fn edge_green_march(
    prop: &mut Propagator,
    l: u8,
    geometry: &ScreenGeometry,
    opts: &EdgeMarchOptions,
) -> Result<EdgeGreenRun> {
    if l > 1 {
        return Err(Error::domain("edge_green_march", "l must be 0 or 1"));
    }
    if opts.cells < 8 || opts.gauss_nodes < 2 {
        return Err(Error::Resolution("edge march needs at least 8 cells and 2 nodes".into()));
    }
    let (a, b, q) = (geometry.a, geometry.b, geometry.gap());
    if !(opts.sigma >= 0.0 && opts.sigma < 0.5 * q.min(b)) {
        return Err(Error::domain("edge_green_march", "sigma must lie in [0, min(q, b)/2)"));
    }
    let (t, w) = gauss_legendre_unit(opts.gauss_nodes);
    let offsets: Vec<f64> = t.iter().map(|t| q * t * t).collect();
    let weights: Vec<f64> = t.iter().zip(&w).map(|(t, w)| 2.0 * q * t * w).collect();
    let kernel = jump_kernel(prop, &offsets);
    let grid = prop.grid.clone();

    let x_l = geometry.abscissa(l as i64);
    let mut u = prop.point_source(opts.sigma);
    let mut x = x_l + opts.sigma;
    let mut gaps = Vec::with_capacity(opts.cells);
    let mut slices = Vec::new();
    let mut parity: f64 = 0.0;
    let mut aliasing: f64 = 0.0;
    for cell in 0..opts.cells {
        let xs = cell as f64 * a + b;
        if l == 1 && cell == 0 {
            // The first gap is covered by the closed-form head term.
            prop.propagate(&mut u, a - x);
            x = a;
            apply_cut(&mut u);
            continue;
        }
        prop.propagate(&mut u, xs - x);
        x = xs;
        parity = parity.max(parity_defect(&u, l == 1));
        if cell % 16 == 0 {
            aliasing = aliasing.max(prop.aliasing_fraction(&u));
        }
        let jump = grid.value_at_axis(&u);
        apply_cut(&mut u);
        if slices.len() < opts.keep_slices {
            slices.push(FieldSlice {
                x_pos: x,
                values: u.clone(),
                convention: SheetConvention::Antisymmetric,
            });
        }
        let mut gs = GapSamples {
            x_start: xs,
            x: Vec::with_capacity(offsets.len()),
            value: Vec::with_capacity(offsets.len()),
            slope: Vec::with_capacity(offsets.len()),
        };
        for (off, kd) in offsets.iter().zip(&kernel) {
            prop.propagate(&mut u, xs + off - x);
            x = xs + off;
            gs.x.push(x);
            gs.value.push(grid.value_at_axis(&u));
            gs.slope.push(grid.slope_at_axis(&u) - jump * kd);
        }
        prop.propagate(&mut u, xs + q - x);
        x = xs + q;
        apply_cut(&mut u);
        if slices.len() < opts.keep_slices {
            slices.push(FieldSlice {
                x_pos: x,
                values: u.clone(),
                convention: SheetConvention::Antisymmetric,
            });
        }
        if !u.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NoConvergence {
                op: "edge_green_march",
                estimate: f64::NAN,
                error: f64::INFINITY,
            });
        }
        gaps.push(gs);
    }
    Ok(EdgeGreenRun {
        l,
        k: grid.k,
        geometry: *geometry,
        weights,
        gaps,
        shore_slices: slices,
        last: FieldSlice {
            x_pos: x,
            values: u,
            convention: SheetConvention::Antisymmetric,
        },
        parity_defect: parity,
        aliasing,
    })
}

/// Truncated lattice series plus fitted tail.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NumericDirectivity {
    pub value: C64,
    /// Derivative in the observation slope `phi`.
    pub derivative: C64,
    /// Head term plus the marched gaps.
    pub partial: C64,
    pub tail: C64,
    /// Absolute bound on the tail of the value series.
    pub tail_bound: f64,
    pub terms: usize,
}

const TAIL_TERMS: usize = 2_000_000;

/// Fits `P_m e^{-ipm} m^{3/2} = A + B/m + C/m^2` on the last two thirds and
/// sums the modelled terms beyond `M`.
fn fitted_tail(terms: &[C64], p: C64) -> (C64, f64) {
    let m_total = terms.len();
    let from = (m_total / 3).max(1);
    let mut ata = [[0.0f64; 3]; 3];
    let mut atr = [C64::new(0.0, 0.0); 3];
    let mut rows = Vec::new();
    for (i, pm) in terms.iter().enumerate().skip(from - 1) {
        let m = (i + 1) as f64;
        let r = pm * (-I * p * m).exp() * m.powf(1.5);
        let basis = [1.0, 1.0 / m, 1.0 / (m * m)];
        for a in 0..3 {
            for b in 0..3 {
                ata[a][b] += basis[a] * basis[b];
            }
            atr[a] += basis[a] * r;
        }
        rows.push((basis, r));
    }
    let coef = solve3(ata, atr);
    let resid = (rows
        .iter()
        .map(|(bs, r)| (r - (coef[0] * bs[0] + coef[1] * bs[1] + coef[2] * bs[2])).norm_sqr())
        .sum::<f64>()
        / rows.len() as f64)
        .sqrt();
    let step = (I * p).exp();
    let start = m_total + 1;
    let mut phase = (I * p * start as f64).exp();
    let mut tail = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    for j in 0..TAIL_TERMS {
        let m = (start + j) as f64;
        if j % 4096 == 0 {
            phase = (I * p * m).exp();
        }
        let env = (coef[0] + coef[1] / m + coef[2] / (m * m)) * m.powf(-1.5);
        tail += phase * env;
        bound += env.norm() + resid * m.powf(-1.5);
        phase *= step;
    }
    (tail, bound)
}

fn solve3(mut a: [[f64; 3]; 3], mut r: [C64; 3]) -> [C64; 3] {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        a.swap(col, piv);
        r.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for c in col..3 {
                a[row][c] -= f * a[col][c];
            }
            let rc = r[col];
            r[row] -= rc * f;
        }
    }
    let mut x = [C64::new(0.0, 0.0); 3];
    for row in (0..3).rev() {
        let mut s = r[row];
        for c in row + 1..3 {
            s -= x[c] * a[row][c];
        }
        x[row] = s / a[row][row];
    }
    x
}

/// Extended directivity `V_l(theta, phi)` and its `phi` derivative from a
/// marched run. Each gap contributes, by Green's theorem, the flux of `w_l`
/// through the axis weighted by the plane wave of slope `phi`.
pub fn extended_directivity_numeric(run: &EdgeGreenRun, theta: C64, phi: C64) -> Result<NumericDirectivity> {
    if run.gaps.len() < 6 {
        return Err(Error::Resolution("too few gaps for a tail fit".into()));
    }
    let k = run.k;
    let g = &run.geometry;
    let q = g.gap();
    let x_l = g.abscissa(run.l as i64);
    let mut vals = Vec::with_capacity(run.gaps.len());
    let mut ders = Vec::with_capacity(run.gaps.len());
    for gap in &run.gaps {
        let pre = -2.0 * (I * k * (gap.x_start - x_l) * theta * theta / 2.0).exp();
        let mut v = C64::new(0.0, 0.0);
        let mut d = C64::new(0.0, 0.0);
        for i in 0..gap.x.len() {
            let dx = gap.x[i] - gap.x_start;
            let e = (I * k * phi * phi * dx / 2.0).exp() * run.weights[i];
            let flux = I / (2.0 * k) * (gap.slope[i] + I * k * phi * gap.value[i]);
            v += e * flux;
            d += e * (I * k * phi * dx * flux - 0.5 * gap.value[i]);
        }
        vals.push(pre * v);
        ders.push(pre * d);
    }
    let (head, head_d) = if run.l == 0 {
        let h = (I * k * q * (phi * phi - theta * theta) / 2.0).exp();
        (h, I * k * q * phi * h)
    } else {
        let s = (k * q / (2.0 * I)).sqrt();
        let z = phi * s;
        (erf(z), 2.0 / PI.sqrt() * (-z * z).exp() * s)
    };
    let p = k * g.a * theta * theta / 2.0;
    let (tail, tail_bound) = fitted_tail(&vals, p);
    let (tail_d, _) = fitted_tail(&ders, p);
    let partial = head + vals.iter().sum::<C64>();
    let value = partial + tail;
    let derivative = head_d + ders.iter().sum::<C64>() + tail_d;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NoConvergence {
            op: "extended_directivity_numeric",
            estimate: f64::NAN,
            error: f64::INFINITY,
        });
    }
    Ok(NumericDirectivity {
        value,
        derivative,
        partial,
        tail,
        tail_bound,
        terms: vals.len(),
    })
}

/// `V_l(theta) = V_l(theta, theta)`.
pub fn directivity_numeric(run: &EdgeGreenRun, theta: C64) -> Result<NumericDirectivity> {
    extended_directivity_numeric(run, theta, theta)
}

/// Diagnostic: `w_l / G` at `y = phi (x - x_l)` on the last slice.
pub fn far_field_ratio(run: &EdgeGreenRun, prop: &Propagator, phi: f64) -> Result<C64> {
    let g = &prop.grid;
    let x = run.last.x_pos - run.geometry.abscissa(run.l as i64);
    let y = phi * x;
    if y.abs() > g.spec.half_width * (1.0 - g.spec.sponge_fraction) {
        return Err(Error::Resolution("far-field point lies in the sponge".into()));
    }
    let j = g.node_near(y);
    let gf = (g.k / (2.0 * PI * I * x)).sqrt() * (I * g.k * g.y[j] * g.y[j] / (2.0 * x)).exp();
    Ok(run.last.values[j] / gf)
}
