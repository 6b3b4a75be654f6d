//! Complex conventions, the free parabolic Green's function, branch rules and
//! quadrature shared by the rest of the crate.

mod erf;
mod quad;

pub use erf::erf;
pub use quad::{gauss_legendre_unit, quad_finite, quad_ray, quad_semiinfinite, QuadOptions};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Wavenumber with limiting absorption, `k = k_real * (1 + i*absorption)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MediumParams {
    pub k_real: f64,
    pub absorption: f64,
}

impl MediumParams {
    pub fn new(k_real: f64, absorption: f64) -> Result<Self> {
        if !(k_real.is_finite() && k_real > 0.0) {
            return Err(Error::Config(format!("k_real must be positive, got {k_real}")));
        }
        if !(absorption.is_finite() && (0.0..0.1).contains(&absorption)) {
            return Err(Error::Config(format!(
                "absorption must lie in [0, 0.1), got {absorption}"
            )));
        }
        Ok(MediumParams { k_real, absorption })
    }

    pub fn k(&self) -> C64 {
        c(self.k_real, self.k_real * self.absorption)
    }

    /// Maps a real slope angle onto the absorbing medium so that `k*theta^2`
    /// stays real: `theta * sqrt(k_real / k)`.
    pub fn absorbing_angle(&self, theta_real: f64) -> C64 {
        theta_real * (C64::from(self.k_real) / self.k()).sqrt()
    }
}

/// Which rule produced a complex slope angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum AngleBranch {
    /// Supplied directly (incidence angles).
    Given,
    /// Root selected by [`sqrt_upper`].
    UpperHalf,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ComplexAngle {
    pub value: C64,
    pub branch: AngleBranch,
}

impl ComplexAngle {
    pub fn given(value: C64) -> Self {
        ComplexAngle {
            value,
            branch: AngleBranch::Given,
        }
    }
}

/// Square root `w` of `z` with `Im(k*w) >= 0`; ties go to `Re(w) >= 0`.
pub fn sqrt_upper(z: C64, k: C64) -> C64 {
    let w = z.sqrt();
    let s = (k * w).im;
    let scale = (k * w).norm();
    if s.abs() <= 1e-15 * scale {
        if w.re < 0.0 || (w.re == 0.0 && w.im < 0.0) {
            -w
        } else {
            w
        }
    } else if s < 0.0 {
        -w
    } else {
        w
    }
}

/// Free-space Green's function of `u_x + (2ik)^{-1} u_yy = 0`,
/// `sqrt(k/(2 pi i x)) exp(i k y^2 / (2x))`, principal root.
pub fn green_function(x: f64, y: f64, medium: &MediumParams) -> Result<C64> {
    if x == 0.0 {
        return Err(Error::domain(
            "green_function",
            "x = 0 is the delta sheet; use the distributional identity",
        ));
    }
    if !(x > 0.0) {
        return Err(Error::domain(
            "green_function",
            format!("axial offset must be positive, got {x}"),
        ));
    }
    Ok(green_complex(x, C64::from(y), medium.k()))
}

/// Total wrapper: zero upstream of the source (`x <= 0`).
pub fn green_function_total(x: f64, y: f64, medium: &MediumParams) -> C64 {
    if x > 0.0 {
        green_complex(x, C64::from(y), medium.k())
    } else {
        C64::new(0.0, 0.0)
    }
}

/// Analytic continuation in `y`, used by contour-rotated quadrature.
pub fn green_complex(x: f64, y: C64, k: C64) -> C64 {
    (k / (2.0 * PI * I * x)).sqrt() * (I * k * y * y / (2.0 * x)).exp()
}

/// Relative L2 distance `|a-b|/|b|`.
pub fn rel_l2(a: &[C64], b: &[C64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}
