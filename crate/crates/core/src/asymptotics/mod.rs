//! Small-gap closed forms: segment strengths, lattice sums and the
//! asymptotic directivities that feed the embedding formulas.

mod lattice;
mod segment;

pub use lattice::{
    invert_generating_function, lattice_sum, lattice_sum_dirichlet, lattice_sum_neumann,
    recursion_coefficients, LatticeKind, LatticeSumResult,
};
pub use segment::{segment_strengths, segment_strengths_quadrature, SegmentStrengths};

use crate::config::{IncidenceSpec, ScreenGeometry};
use crate::error::{Error, Result, Warning};
use crate::numerics::{c, ComplexAngle, C64, I};
use crate::special::{polylog, PolylogOrder};
use std::f64::consts::PI;

/// Directivities and their angular derivatives at one incidence angle.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DirectivitySet {
    pub v0: C64,
    pub v1: C64,
    pub v0_prime: C64,
    pub v1_prime: C64,
    pub theta: ComplexAngle,
}

/// Floquet phase `p = k a theta^2 / 2`.
pub fn floquet_phase(theta: C64, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> C64 {
    spec.k() * geometry.a * theta * theta / 2.0
}

fn lambda_warning(theta: C64, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> Vec<Warning> {
    let s = (spec.k() * geometry.gap() * theta * theta).norm();
    if s > 1.0 {
        vec![Warning::new(
            "lambda_one",
            format!("k(a-b)theta^2 = {s:.4} is not small; lambda_1 = 1 is questionable"),
        )]
    } else {
        Vec::new()
    }
}

/// `V0 = 1 / (1 + (2 sqrt(eps)/pi) Li_{1/2}(e^{i k a theta^2 / 2}))`.
pub fn v0_asymptotic(
    theta: C64,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> Result<(C64, Vec<Warning>)> {
    let p = floquet_phase(theta, spec, geometry);
    let li = polylog(PolylogOrder::Half, (I * p).exp())?;
    let beta = 2.0 * geometry.epsilon().sqrt() / PI;
    let den = 1.0 + beta * li;
    if den.norm() == 0.0 {
        return Err(Error::Degenerate {
            op: "v0_asymptotic",
            msg: "lattice resonance".into(),
        });
    }
    Ok((1.0 / den, lambda_warning(theta, spec, geometry)))
}

/// Root used for `sqrt(1/i)` in the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub enum BranchRule {
    /// `sqrt(1/i) = e^{-i pi/4}`.
    #[default]
    Principal,
    /// The opposite root. Only used to check that validation detects it.
    Reflected,
}

/// `sqrt(2 (a-b) k / (pi i))`, the phi-slope of the asymptotic `V1`.
pub fn v1_slope(spec: &IncidenceSpec, geometry: &ScreenGeometry) -> C64 {
    v1_slope_with(spec, geometry, BranchRule::Principal)
}

pub fn v1_slope_with(spec: &IncidenceSpec, geometry: &ScreenGeometry, branch: BranchRule) -> C64 {
    let s = (2.0 * geometry.gap() * spec.k() / (PI * I)).sqrt();
    match branch {
        BranchRule::Principal => s,
        BranchRule::Reflected => -s,
    }
}

/// Linear-in-phi asymptotic `V1(theta, phi)`.
pub fn v1_asymptotic(phi: C64, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> C64 {
    v1_slope(spec, geometry) * phi
}

/// The Neumann-lattice term dropped from `V1(theta, phi)`:
/// `i k phi lambda_1 h_N e^{ip} c_hat(p)` with `lambda_1 = 1`.
pub fn v1_neumann_correction(
    theta: C64,
    phi: C64,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> Result<C64> {
    let p = floquet_phase(theta, spec, geometry);
    let h = segment_strengths(geometry.gap(), &spec.medium);
    let chat = lattice_sum_neumann(p, spec, geometry)?.chat;
    Ok(I * spec.k() * phi * h.h_n * (I * p).exp() * chat)
}

/// Small-theta limit `V0 ~ (theta/2) sqrt(pi a k / (2 i eps))`.
pub fn v0_small_theta(theta: C64, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> C64 {
    theta / 2.0 * (PI * spec.ka / (2.0 * I * geometry.epsilon())).sqrt()
}

/// Asymptotic directivity set: `V0' = 0`, `V1 = V1' theta`.
pub fn directivity_set(
    theta: ComplexAngle,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> Result<(DirectivitySet, Vec<Warning>)> {
    directivity_set_with(theta, spec, geometry, BranchRule::Principal)
}

pub fn directivity_set_with(
    theta: ComplexAngle,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
    branch: BranchRule,
) -> Result<(DirectivitySet, Vec<Warning>)> {
    let (v0, w) = v0_asymptotic(theta.value, spec, geometry)?;
    let slope = v1_slope_with(spec, geometry, branch);
    Ok((
        DirectivitySet {
            v0,
            v1: slope * theta.value,
            v0_prime: c(0.0, 0.0),
            v1_prime: slope,
            theta,
        },
        w,
    ))
}

/// Asymptotic extended directivities `V_l(theta, phi)`; `V0` does not depend
/// on `phi` and `V1` is linear in it.
pub fn extended_asymptotic(
    l: u8,
    theta: C64,
    phi: C64,
    spec: &IncidenceSpec,
    geometry: &ScreenGeometry,
) -> Result<C64> {
    match l {
        0 => Ok(v0_asymptotic(theta, spec, geometry)?.0),
        1 => Ok(v1_asymptotic(phi, spec, geometry)),
        _ => Err(Error::domain("extended_asymptotic", "l must be 0 or 1")),
    }
}
