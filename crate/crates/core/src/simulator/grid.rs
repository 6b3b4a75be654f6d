use crate::error::{Error, Result};
use crate::numerics::{C64, I};
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Transverse discretisation and absorbing layer.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GridSpec {
    /// Half-width `Y` of the periodic box `[-Y, Y)`.
    pub half_width: f64,
    /// Requested step; the actual step is `2Y/N` with `N` a power of two.
    pub dy_max: f64,
    /// Fraction of each side occupied by the sponge.
    pub sponge_fraction: f64,
    /// Peak damping rate of the cubic sponge profile (per unit `x`).
    pub sponge_strength: f64,
    /// Upper bound on a single spectral step.
    pub dx_cap: f64,
}

impl GridSpec {
    /// Defaults tied to the diffraction width `d = sqrt(q/k)`.
    pub fn for_gap(q: f64, k_real: f64, half_width: f64, steps_per_width: f64) -> Self {
        GridSpec {
            half_width,
            dy_max: (q / k_real).sqrt() / steps_per_width,
            sponge_fraction: 0.3,
            sponge_strength: 5.0,
            dx_cap: 0.25,
        }
    }
}

/// Midpoint grid `y_j = (j - N/2 + 1/2) dy`; `y = 0` lies between nodes
/// `N/2 - 1` and `N/2`, so the lower half is exactly `j < N/2`.
#[derive(Debug, Clone)]
pub struct SimGrid {
    pub spec: GridSpec,
    pub n: usize,
    pub dy: f64,
    pub y: Vec<f64>,
    pub eta: Vec<f64>,
    /// Sponge profile in `[0, 1]`.
    pub sponge: Vec<f64>,
    pub k: C64,
    pub k_real: f64,
    /// Largest admissible substep.
    pub dx_max: f64,
}

impl SimGrid {
    pub fn new(spec: GridSpec, k: C64) -> Result<Self> {
        if !(spec.half_width > 0.0 && spec.dy_max > 0.0) {
            return Err(Error::Resolution("grid needs positive half-width and step".into()));
        }
        let want = (2.0 * spec.half_width / spec.dy_max).ceil() as usize;
        let n = want.max(16).next_power_of_two();
        if n > 1 << 22 {
            return Err(Error::Resolution(format!("grid of {n} points is too large")));
        }
        let dy = 2.0 * spec.half_width / n as f64;
        let y: Vec<f64> = (0..n).map(|j| (j as f64 - n as f64 / 2.0 + 0.5) * dy).collect();
        let eta: Vec<f64> = (0..n)
            .map(|m| {
                let mm = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
                2.0 * PI * mm / (n as f64 * dy)
            })
            .collect();
        let width = spec.sponge_fraction * spec.half_width;
        let start = spec.half_width - width;
        let sponge = y
            .iter()
            .map(|&v| {
                if width > 0.0 && v.abs() > start {
                    ((v.abs() - start) / width).powi(3)
                } else {
                    0.0
                }
            })
            .collect();
        let k_real = k.re;
        let theta_nyq = PI / (dy * k_real);
        let dx_max = if width > 0.0 {
            (0.5 * width / theta_nyq).min(spec.dx_cap)
        } else {
            spec.dx_cap
        };
        Ok(SimGrid {
            spec,
            n,
            dy,
            y,
            eta,
            sponge,
            k,
            k_real,
            dx_max,
        })
    }

    pub fn lower(&self) -> std::ops::Range<usize> {
        0..self.n / 2
    }

    /// Value at `y = 0` by four-point interpolation of a smooth field.
    pub fn value_at_axis(&self, u: &[C64]) -> C64 {
        let i = self.n / 2;
        (-u[i - 2] + 9.0 * u[i - 1] + 9.0 * u[i] - u[i + 1]) / 16.0
    }

    /// `du/dy` at `y = 0` by the fourth-order midpoint difference.
    pub fn slope_at_axis(&self, u: &[C64]) -> C64 {
        let i = self.n / 2;
        (u[i - 2] - 27.0 * u[i - 1] + 27.0 * u[i] - u[i + 1]) / (24.0 * self.dy)
    }

    /// Index of the node closest to `y`.
    pub fn node_near(&self, y: f64) -> usize {
        let j = (y / self.dy + self.n as f64 / 2.0 - 0.5).round();
        j.clamp(0.0, (self.n - 1) as f64) as usize
    }
}

/// Which representation an array uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SheetConvention {
    /// One array for sheet 1*, sheet 2* being its negative.
    Antisymmetric,
    /// Independent arrays per sheet.
    TwoSheet,
}

/// A sampled field on the grid at one axial position.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSlice {
    pub x_pos: f64,
    pub values: Vec<C64>,
    pub convention: SheetConvention,
}

/// Crossing a cut on the lower half-line: negate samples with `y < 0`.
pub fn apply_cut(values: &mut [C64]) {
    let half = values.len() / 2;
    for v in &mut values[..half] {
        *v = -*v;
    }
}

struct CachedStep {
    h: f64,
    spectral: Vec<C64>,
    sponge: Vec<f64>,
}

/// Exact band-limited free propagation followed by sponge damping.
pub struct Propagator {
    pub grid: SimGrid,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<C64>,
    cache: Vec<CachedStep>,
    /// Number of FFT pairs performed.
    pub steps_taken: u64,
}

const CACHE_SLOTS: usize = 48;

impl Propagator {
    pub fn new(grid: SimGrid) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.n);
        let inv = planner.plan_fft_inverse(grid.n);
        let scratch_len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        Propagator {
            grid,
            fwd,
            inv,
            scratch: vec![C64::new(0.0, 0.0); scratch_len],
            cache: Vec::new(),
            steps_taken: 0,
        }
    }

    fn factors(&mut self, h: f64) -> usize {
        if let Some(i) = self.cache.iter().position(|c| c.h == h) {
            return i;
        }
        let g = &self.grid;
        let norm = 1.0 / g.n as f64;
        let spectral = g
            .eta
            .iter()
            .map(|&e| (-I * e * e * h / (2.0 * g.k)).exp() * norm)
            .collect();
        let s = g.spec.sponge_strength;
        let sponge = g.sponge.iter().map(|&p| (-s * p * h).exp()).collect();
        if self.cache.len() >= CACHE_SLOTS {
            self.cache.remove(0);
        }
        self.cache.push(CachedStep { h, spectral, sponge });
        self.cache.len() - 1
    }

    /// One spectral step of length `h` (no substep control).
    pub fn step(&mut self, u: &mut [C64], h: f64) {
        let idx = self.factors(h);
        self.fwd.process_with_scratch(u, &mut self.scratch);
        let c = &self.cache[idx];
        for (v, m) in u.iter_mut().zip(&c.spectral) {
            *v *= m;
        }
        self.inv.process_with_scratch(u, &mut self.scratch);
        for (v, s) in u.iter_mut().zip(&c.sponge) {
            *v *= s;
        }
        self.steps_taken += 1;
    }

    /// Propagates by `dx >= 0` in equal substeps no longer than `dx_max`.
    pub fn propagate(&mut self, u: &mut [C64], dx: f64) {
        if dx <= 0.0 {
            return;
        }
        let n = (dx / self.grid.dx_max - 1e-12).ceil().max(1.0) as usize;
        let h = dx / n as f64;
        for _ in 0..n {
            self.step(u, h);
        }
    }

    pub fn propagate_slice(&mut self, slice: &mut FieldSlice, dx: f64) -> Result<()> {
        if !(dx > 0.0) {
            return Err(Error::domain("propagate_slice", format!("dx must be positive, got {dx}")));
        }
        self.propagate(&mut slice.values, dx);
        slice.x_pos += dx;
        Ok(())
    }

    /// Band-limited `G(sigma, y)` (Nyquist bin removed); `sigma = 0` gives
    /// the band-limited delta at `y = 0`.
    pub fn point_source(&mut self, sigma: f64) -> Vec<C64> {
        let g = &self.grid;
        let y0 = g.y[0];
        let mut u: Vec<C64> = g
            .eta
            .iter()
            .enumerate()
            .map(|(m, &e)| {
                if m == g.n / 2 {
                    C64::new(0.0, 0.0)
                } else {
                    (I * e * y0).exp() * (-I * e * e * sigma / (2.0 * g.k)).exp() / g.dy
                }
            })
            .collect();
        self.inv.process_with_scratch(&mut u, &mut self.scratch);
        let norm = 1.0 / g.n as f64;
        for v in &mut u {
            *v *= norm;
        }
        u
    }

    /// Aliasing monitor: fraction of spectral energy in the outer eighth of
    /// the band.
    pub fn aliasing_fraction(&mut self, u: &[C64]) -> f64 {
        let mut buf = u.to_vec();
        self.fwd.process_with_scratch(&mut buf, &mut self.scratch);
        let n = self.grid.n;
        let total: f64 = buf.iter().map(|v| v.norm_sqr()).sum();
        let edge: f64 = buf
            .iter()
            .enumerate()
            .filter(|(m, _)| {
                let mm = if *m < n / 2 { *m } else { n - *m };
                mm > 3 * n / 8
            })
            .map(|(_, v)| v.norm_sqr())
            .sum();
        if total == 0.0 {
            0.0
        } else {
            edge / total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{green_function, rel_l2, MediumParams};

    fn propagator(k: C64, half_width: f64, dy: f64, sponge: f64) -> Propagator {
        let spec = GridSpec {
            half_width,
            dy_max: dy,
            sponge_fraction: 0.3,
            sponge_strength: sponge,
            dx_cap: 0.25,
        };
        Propagator::new(SimGrid::new(spec, k).unwrap())
    }

    #[test]
    fn grid_is_symmetric_about_the_axis() {
        let p = propagator(C64::new(100.0, 0.1), 2.0, 0.01, 5.0);
        let g = &p.grid;
        assert!(g.n.is_power_of_two());
        for j in 0..g.n {
            assert!((g.y[j] + g.y[g.n - 1 - j]).abs() < 1e-12);
        }
        assert!(g.y[g.n / 2 - 1] < 0.0 && g.y[g.n / 2] > 0.0);
    }

    #[test]
    fn semigroup_without_sponge() {
        let mut p = propagator(C64::new(100.0, 0.1), 4.0, 0.01, 0.0);
        let u0: Vec<C64> = p.grid.y.iter().map(|&y| C64::new((-y * y * 20.0).exp(), y)).collect();
        let mut one = u0.clone();
        p.step(&mut one, 0.2);
        let mut two = u0;
        p.step(&mut two, 0.1);
        p.step(&mut two, 0.1);
        assert!(rel_l2(&two, &one) < 1e-12);
    }

    #[test]
    fn band_limited_source_reproduces_green_function() {
        let medium = MediumParams::new(100.0, 0.05).unwrap();
        let mut p = propagator(medium.k(), 10.0, 0.005, 0.0);
        let mut u = p.point_source(0.0);
        p.propagate(&mut u, 1.0);
        let exact: Vec<C64> = p.grid.y.iter().map(|&y| green_function(1.0, y, &medium).unwrap()).collect();
        assert!(rel_l2(&u, &exact) < 1e-10);
        let direct = p.point_source(1.0);
        assert!(rel_l2(&direct, &exact) < 1e-10);
    }

    #[test]
    fn cut_negates_lower_half_only() {
        let mut v = vec![C64::new(1.0, 1.0); 8];
        apply_cut(&mut v);
        assert!(v[..4].iter().all(|z| *z == C64::new(-1.0, -1.0)));
        assert!(v[4..].iter().all(|z| *z == C64::new(1.0, 1.0)));
    }

    #[test]
    fn axis_stencils_are_exact_for_cubics() {
        let p = propagator(C64::new(100.0, 0.0), 1.0, 0.01, 0.0);
        let u: Vec<C64> = p.grid.y.iter().map(|&y| C64::new(2.0 + 3.0 * y - y * y + 5.0 * y * y * y, 0.0)).collect();
        assert!((p.grid.value_at_axis(&u).re - 2.0).abs() < 1e-12);
        assert!((p.grid.slope_at_axis(&u).re - 3.0).abs() < 1e-9);
    }

    #[test]
    fn propagate_slice_rejects_nonpositive_steps() {
        let mut p = propagator(C64::new(100.0, 0.0), 1.0, 0.01, 0.0);
        let mut s = FieldSlice {
            x_pos: 0.0,
            values: vec![C64::new(0.0, 0.0); p.grid.n],
            convention: SheetConvention::TwoSheet,
        };
        assert!(p.propagate_slice(&mut s, 0.0).is_err());
        p.propagate_slice(&mut s, 0.5).unwrap();
        assert_eq!(s.x_pos, 0.5);
    }
}
