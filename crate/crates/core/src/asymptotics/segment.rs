use crate::error::Result;
use crate::numerics::{green_complex, quad_ray, MediumParams, QuadOptions, C64, I};
use std::f64::consts::PI;

/// Point-scatterer strengths of a short gap of length `q`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SegmentStrengths {
    /// Monopole strength `-2 sqrt(2 i q / (pi k))`.
    pub h_d: C64,
    /// Dipole strength `-(2/3) (q/k)^{3/2} sqrt(2 / (pi i))`.
    pub h_n: C64,
}

pub fn segment_strengths(q: f64, medium: &MediumParams) -> SegmentStrengths {
    let k = medium.k();
    SegmentStrengths {
        h_d: -2.0 * (2.0 * I * q / (PI * k)).sqrt(),
        h_n: -(2.0 / 3.0) * (C64::from(q) / k).powf(1.5) * (2.0 / (PI * I)).sqrt(),
    }
}

/// Strengths from the defining double integrals over the quarter plane,
/// `h_D = -4 int int G(q, y + y') dy dy'` and
/// `h_N = 4 int int y y' G(q, y + y') dy dy'`.
///
/// Both variables are rotated onto `e^{i pi/4} t`, where the Fresnel factor
/// becomes a Gaussian.
pub fn segment_strengths_quadrature(q: f64, medium: &MediumParams) -> Result<SegmentStrengths> {
    let k = medium.k();
    let rot = PI / 4.0;
    let scale = (q / medium.k_real).sqrt();
    let opts = QuadOptions {
        rel_tol: 1e-11,
        ..QuadOptions::default()
    };
    let mut err = None;
    let mut double = |weight: &dyn Fn(C64, C64) -> C64| -> C64 {
        let outer = quad_ray(
            |y| {
                match quad_ray(|yp| weight(y, yp) * green_complex(q, y + yp, k), rot, scale, &opts) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        C64::new(0.0, 0.0)
                    }
                }
            },
            rot,
            scale,
            &opts,
        );
        outer.unwrap_or_else(|e| {
            err = Some(e);
            C64::new(0.0, 0.0)
        })
    };
    let mono = double(&|_, _| C64::new(1.0, 0.0));
    let dip = double(&|y, yp| y * yp);
    if let Some(e) = err {
        return Err(e);
    }
    Ok(SegmentStrengths {
        h_d: -4.0 * mono,
        h_n: 4.0 * dip,
    })
}
