//! Embedding formulas: sheet-level reflection/transmission coefficients from
//! directivities, the regularised zeroth transmission coefficient, the map to
//! waveguide modes and a transverse flux audit.

use crate::asymptotics::{directivity_set_with, BranchRule, DirectivitySet};
use crate::config::{floquet_angle, IncidenceSpec, ScreenGeometry};
use crate::error::{Error, Result, Warning};
use crate::numerics::{C64, I};
use std::f64::consts::PI;

/// Coefficients for the contiguous order window `n_min..=n_max`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CoefficientTable {
    pub n_min: i64,
    pub n_max: i64,
    pub psi: Vec<C64>,
    pub r1: Vec<C64>,
    pub t1: Vec<C64>,
    pub r2: Vec<C64>,
    pub t2: Vec<C64>,
    pub twg: Vec<C64>,
    pub rwg: Vec<C64>,
    /// Waveguide mode index `m - 2n`.
    pub mode_index: Vec<i64>,
}

impl CoefficientTable {
    pub fn orders(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max
    }

    pub fn index(&self, n: i64) -> Option<usize> {
        if n < self.n_min || n > self.n_max {
            None
        } else {
            Some((n - self.n_min) as usize)
        }
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    /// Sub-table for the orders of `window` that this table covers.
    pub fn restrict(&self, window: std::ops::RangeInclusive<i64>) -> Result<Self> {
        let lo = (*window.start()).max(self.n_min);
        let hi = (*window.end()).min(self.n_max);
        if lo > hi {
            return Err(Error::domain("restrict", "window does not overlap the table"));
        }
        let (i, j) = ((lo - self.n_min) as usize, (hi - self.n_min) as usize + 1);
        Ok(CoefficientTable {
            n_min: lo,
            n_max: hi,
            psi: self.psi[i..j].to_vec(),
            r1: self.r1[i..j].to_vec(),
            t1: self.t1[i..j].to_vec(),
            r2: self.r2[i..j].to_vec(),
            t2: self.t2[i..j].to_vec(),
            twg: self.twg[i..j].to_vec(),
            rwg: self.rwg[i..j].to_vec(),
            mode_index: self.mode_index[i..j].to_vec(),
        })
    }
}

/// Table for a screen without gaps: nothing couples the sheets, so the
/// incident wave simply carries on (`T2[0] = 1`, everything else zero).
pub fn closed_screen_table(spec: &IncidenceSpec, geometry: &ScreenGeometry, window: std::ops::RangeInclusive<i64>) -> CoefficientTable {
    let zero = C64::new(0.0, 0.0);
    let mut t = CoefficientTable {
        n_min: *window.start(),
        n_max: *window.end(),
        psi: Vec::new(),
        r1: Vec::new(),
        t1: Vec::new(),
        r2: Vec::new(),
        t2: Vec::new(),
        twg: Vec::new(),
        rwg: Vec::new(),
        mode_index: Vec::new(),
    };
    for n in window {
        t.psi.push(floquet_angle(n, spec, geometry).value);
        t.r1.push(zero);
        t.t1.push(zero);
        t.r2.push(zero);
        t.t2.push(if n == 0 { C64::new(1.0, 0.0) } else { zero });
        t.mode_index.push(spec.mode_index as i64 - 2 * n);
    }
    waveguide_map(&mut t, geometry);
    t
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FluxAudit {
    pub incoming: f64,
    pub outgoing: f64,
    pub defect: f64,
}

impl FluxAudit {
    pub fn relative_defect(&self) -> f64 {
        self.defect / self.incoming
    }
}

fn ika(spec: &IncidenceSpec, geometry: &ScreenGeometry) -> C64 {
    I * spec.k() * geometry.a
}

fn cross_phase(psi: C64, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> C64 {
    let th = spec.theta();
    (I * spec.k() * geometry.b * (psi * psi - th * th) / 2.0).exp()
}

/// Sheet-1 reflection coefficient of order `n`; `d_in` holds the directivities
/// at the incidence angle and `d_n` those at `psi_n`.
pub fn reflection_coefficient(
    n: i64,
    d_in: &DirectivitySet,
    d_n: &DirectivitySet,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> Result<C64> {
    let psi = d_n.theta.value;
    let th = spec.theta();
    let den = ika(spec, geometry) * psi * (psi + th);
    if psi.norm() == 0.0 || (psi + th).norm() == 0.0 {
        return Err(Error::Degenerate {
            op: "reflection_coefficient",
            msg: format!("grazing order n = {n}"),
        });
    }
    let num = d_n.v0 * d_in.v1 + d_n.v1 * d_in.v0 * cross_phase(psi, spec, geometry);
    Ok(num / den)
}

/// Sheet-1 transmission coefficient of a non-zero order.
pub fn transmission_coefficient(
    n: i64,
    d_in: &DirectivitySet,
    d_n: &DirectivitySet,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> Result<C64> {
    if n == 0 {
        return Err(Error::Degenerate {
            op: "transmission_coefficient",
            msg: "n = 0 must use transmission_zero".into(),
        });
    }
    let psi = d_n.theta.value;
    let th = spec.theta();
    if psi.norm() == 0.0 || (th - psi).norm() == 0.0 {
        return Err(Error::Degenerate {
            op: "transmission_coefficient",
            msg: format!("grazing order n = {n}"),
        });
    }
    let den = ika(spec, geometry) * psi * (th - psi);
    let num = -d_n.v0 * d_in.v1 + d_n.v1 * d_in.v0 * cross_phase(psi, spec, geometry);
    Ok(num / den)
}

/// Regularised `T1[0] = (V0' V1 - V1' V0) / (i k a theta)`.
pub fn transmission_zero(d_in: &DirectivitySet, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> Result<C64> {
    let th = spec.theta();
    if th.norm() == 0.0 {
        return Err(Error::Degenerate {
            op: "transmission_zero",
            msg: "theta_in = 0".into(),
        });
    }
    Ok((d_in.v0_prime * d_in.v1 - d_in.v1_prime * d_in.v0) / (ika(spec, geometry) * th))
}

/// Forward-difference form of the `phi -> theta` limit:
/// `[V0(th, th+d) V1(th) - V1(th, th+d) V0(th)] / (i k a th d)`.
pub fn transmission_zero_difference<F>(
    extended: F,
    delta: f64,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> Result<C64>
where
    F: Fn(u8, C64, C64) -> Result<C64>,
{
    let th = spec.theta();
    let v0 = extended(0, th, th)?;
    let v1 = extended(1, th, th)?;
    let v0d = extended(0, th, th + delta)?;
    let v1d = extended(1, th, th + delta)?;
    Ok((v0d * v1 - v1d * v0) / (ika(spec, geometry) * th * delta))
}

/// Default order window: four evanescent guard orders below the lowest
/// propagating order, up to the last order with a physical mode `m - 2n >= 0`.
pub fn default_window(spec: &IncidenceSpec) -> std::ops::RangeInclusive<i64> {
    let t = spec.theta_real();
    let lowest = (-spec.ka * t * t / (4.0 * PI)).ceil() as i64;
    let top = (spec.mode_index / 2) as i64;
    (lowest - 4)..=top.max(lowest)
}

/// Builds a full table from directivity providers. `d_at(n)` returns the
/// directivity set at `psi_n` (`n = 0` is the incidence set).
pub fn table_from_directivities<F>(
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
    window: std::ops::RangeInclusive<i64>,
    d_at: F,
) -> Result<CoefficientTable>
where
    F: Fn(i64) -> Result<DirectivitySet>,
{
    let (n_min, n_max) = (*window.start(), *window.end());
    let d_in = d_at(0)?;
    let mut t = CoefficientTable {
        n_min,
        n_max,
        psi: Vec::new(),
        r1: Vec::new(),
        t1: Vec::new(),
        r2: Vec::new(),
        t2: Vec::new(),
        twg: Vec::new(),
        rwg: Vec::new(),
        mode_index: Vec::new(),
    };
    for n in window {
        let d_n = if n == 0 { d_in } else { d_at(n)? };
        let r1 = reflection_coefficient(n, &d_in, &d_n, spec, geometry)?;
        let (t1, t2) = if n == 0 {
            let t1 = transmission_zero(&d_in, spec, geometry)?;
            (t1, 1.0 - t1)
        } else {
            let t1 = transmission_coefficient(n, &d_in, &d_n, spec, geometry)?;
            (t1, -t1)
        };
        t.psi.push(d_n.theta.value);
        t.r1.push(r1);
        t.r2.push(-r1);
        t.t1.push(t1);
        t.t2.push(t2);
        t.mode_index.push(spec.mode_index as i64 - 2 * n);
    }
    waveguide_map(&mut t, geometry);
    Ok(t)
}

/// Closed-form pipeline at one incidence angle.
pub fn asymptotic_table(
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
    window: std::ops::RangeInclusive<i64>,
    branch: BranchRule,
) -> Result<(CoefficientTable, Vec<Warning>)> {
    let (_, warnings) = directivity_set_with(spec.theta_in, spec, geometry, branch)?;
    let table = table_from_directivities(spec, geometry, window, |n| {
        let psi = floquet_angle(n, spec, geometry);
        Ok(directivity_set_with(psi, spec, geometry, branch)?.0)
    })?;
    Ok((table, warnings))
}

/// `Twg[n] = e^{i pi n eps}(T1 + R2)`, `Rwg[n] = e^{i pi n eps}(R1 + T2)`.
/// Entries whose mode index `m - 2n` is negative are left as NaN.
pub fn waveguide_map(table: &mut CoefficientTable, geometry: &ScreenGeometry) {
    let eps = geometry.epsilon();
    table.twg.clear();
    table.rwg.clear();
    for (i, n) in table.orders().enumerate() {
        if table.mode_index[i] < 0 {
            table.twg.push(C64::new(f64::NAN, f64::NAN));
            table.rwg.push(C64::new(f64::NAN, f64::NAN));
            continue;
        }
        let ph = (I * PI * n as f64 * eps).exp();
        table.twg.push(ph * (table.t1[i] + table.r2[i]));
        table.rwg.push(ph * (table.r1[i] + table.t2[i]));
    }
}

/// Transverse flux balance over the propagating orders of the window.
pub fn flux_audit(table: &CoefficientTable, spec: &IncidenceSpec) -> FluxAudit {
    let incoming = spec.theta().re;
    let outgoing = order_fluxes(table, spec).iter().map(|(_, f)| f).sum();
    FluxAudit {
        incoming,
        outgoing,
        defect: incoming - outgoing,
    }
}

fn order_fluxes(table: &CoefficientTable, spec: &IncidenceSpec) -> Vec<(i64, f64)> {
    let t = spec.theta_real();
    let mut out = Vec::new();
    for (i, n) in table.orders().enumerate() {
        if t * t + 4.0 * PI * n as f64 / spec.ka < 0.0 {
            continue;
        }
        let w = table.r1[i].norm_sqr() + table.r2[i].norm_sqr() + table.t1[i].norm_sqr() + table.t2[i].norm_sqr();
        if w.is_finite() {
            out.push((n, table.psi[i].re * w));
        }
    }
    out
}

/// Flux balance with the unresolved high orders restored. Order fluxes decay
/// like `n^{-3/2}` (modulated with period `1/eps` in `n`); the amplitude is
/// the mean of `f_n n^{3/2}` over the last `fit_orders` orders and the tail
/// is summed from it.
pub fn flux_audit_extrapolated(table: &CoefficientTable, spec: &IncidenceSpec, fit_orders: usize) -> Result<FluxAudit> {
    let f = order_fluxes(table, spec);
    if f.len() < fit_orders + 4 || fit_orders == 0 {
        return Err(Error::Resolution(format!(
            "{} propagating orders are too few to fit a tail over {fit_orders}",
            f.len()
        )));
    }
    let last = &f[f.len() - fit_orders..];
    let amp = last.iter().map(|&(n, v)| v * (n as f64).powf(1.5)).sum::<f64>() / fit_orders as f64;
    let n_top = f[f.len() - 1].0;
    let m = (n_top + 1) as f64;
    // Midpoint estimate of sum_{n > n_top} n^{-3/2}.
    let tail = amp * 2.0 / (m - 0.5).sqrt();
    let incoming = spec.theta().re;
    let outgoing = f.iter().map(|(_, v)| v).sum::<f64>() + tail;
    Ok(FluxAudit {
        incoming,
        outgoing,
        defect: incoming - outgoing,
    })
}
