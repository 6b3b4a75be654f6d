use super::segment::segment_strengths;
use crate::config::{IncidenceSpec, ScreenGeometry};
use crate::error::{Error, Result};
use crate::numerics::{C64, I};
use crate::special::{polylog, PolylogOrder};
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum LatticeKind {
    /// Monopole lattice, kernel `n^{-1/2}`.
    Dirichlet,
    /// Dipole lattice, kernel `n^{-3/2}`.
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LatticeSumResult {
    pub chat: C64,
    pub p: C64,
    pub kind: LatticeKind,
}

/// Source amplitude `s`, coupling `g` and kernel exponent of
/// `c_n = s n^{-e} + g sum_{l<n} c_l (n-l)^{-e}`.
fn recursion_parts(kind: LatticeKind, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> (C64, C64, f64) {
    let k = spec.k();
    let a = geometry.a;
    let q = geometry.gap();
    let h = segment_strengths(q, &spec.medium);
    match kind {
        LatticeKind::Dirichlet => {
            let amp = (k / (2.0 * PI * I * a)).sqrt();
            (amp, amp * h.h_d, 0.5)
        }
        LatticeKind::Neumann => {
            let f0 = -(2.0 * I * q / (PI * k)).sqrt();
            let f1 = (k / a).powf(1.5) * (I / (2.0 * PI)).sqrt();
            (f0 * f1, f1 * h.h_n, 1.5)
        }
    }
}

/// Closed-form generating function `c_hat(p) = s Li(e^{ip}) / (1 - g Li(e^{ip}))`.
pub fn lattice_sum(
    kind: LatticeKind,
    p: C64,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> Result<LatticeSumResult> {
    if p.im < 0.0 {
        return Err(Error::domain("lattice_sum", format!("Im p = {} is negative", p.im)));
    }
    let (src, coupling, _) = recursion_parts(kind, spec, geometry);
    let order = match kind {
        LatticeKind::Dirichlet => PolylogOrder::Half,
        LatticeKind::Neumann => PolylogOrder::ThreeHalves,
    };
    let z = (I * p).exp();
    let chat = if z.norm() == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        let li = polylog(order, z)?;
        let den = 1.0 - coupling * li;
        if den.norm() < 1e-300 {
            return Err(Error::Degenerate {
                op: "lattice_sum",
                msg: format!("resonance at p = {p}"),
            });
        }
        src * li / den
    };
    Ok(LatticeSumResult { chat, p, kind })
}

pub fn lattice_sum_dirichlet(p: C64, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> Result<LatticeSumResult> {
    lattice_sum(LatticeKind::Dirichlet, p, spec, geometry)
}

pub fn lattice_sum_neumann(p: C64, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> Result<LatticeSumResult> {
    lattice_sum(LatticeKind::Neumann, p, spec, geometry)
}

/// `c_1 .. c_n_max` from the direct convolution recursion.
pub fn recursion_coefficients(
    kind: LatticeKind,
    n_max: usize,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> Vec<C64> {
    let (src, coupling, e) = recursion_parts(kind, spec, geometry);
    let kernel: Vec<f64> = (0..=n_max).map(|n| if n == 0 { 0.0 } else { (n as f64).powf(-e) }).collect();
    let mut c: Vec<C64> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let conv: C64 = (1..n).map(|l| c[l - 1] * kernel[n - l]).sum();
        c.push(src * kernel[n] + coupling * conv);
    }
    c
}

/// Recovers `c_1 .. c_n_max` from a generating function by sampling it on the
/// shifted line `p = t + i eta`, `t = 2 pi j / m_points`, and taking one DFT.
pub fn invert_generating_function<F>(chat: F, n_max: usize, m_points: usize, eta: f64) -> Result<Vec<C64>>
where
    F: Fn(C64) -> Result<C64>,
{
    if n_max >= m_points {
        return Err(Error::domain("invert_generating_function", "need n_max < m_points"));
    }
    let mut buf = (0..m_points)
        .map(|j| chat(C64::new(2.0 * PI * j as f64 / m_points as f64, eta)))
        .collect::<Result<Vec<_>>>()?;
    FftPlanner::new().plan_fft_forward(m_points).process(&mut buf);
    Ok((1..=n_max)
        .map(|n| buf[n] * (eta * n as f64).exp() / m_points as f64)
        .collect())
}
