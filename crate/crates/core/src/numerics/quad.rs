//! Adaptive Gauss-Kronrod (7/15) quadrature for complex integrands on finite
//! intervals, half-lines and rays in the complex plane.

use super::{C64, I};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of subintervals per finite interval.
    pub max_intervals: usize,
    /// Maximum number of panels on a half-line.
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_intervals: 2000,
            max_panels: 200,
        }
    }
}

fn gk15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Integral over `[a, b]`, returning `(value, error estimate)`.
pub fn quad_finite<F: FnMut(f64) -> C64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<(C64, f64)> {
    let (v, e) = gk15(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: C64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= tol {
            return Ok((total, err));
        }
        if pieces.len() >= opts.max_intervals {
            return Err(Error::NoConvergence {
                op: "quad_finite",
                estimate: total.norm(),
                error: err,
            });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (a0, b0, _, _) = pieces.swap_remove(idx);
        let m = 0.5 * (a0 + b0);
        let (v1, e1) = gk15(&mut f, a0, m);
        let (v2, e2) = gk15(&mut f, m, b0);
        pieces.push((a0, m, v1, e1));
        pieces.push((m, b0, v2, e2));
    }
}

/// `int_0^inf f(t) dt` for an integrand decaying beyond `decay_scale`.
///
/// Panels double in length; the sum stops once three consecutive panels
/// contribute below tolerance.
pub fn quad_semiinfinite<F: FnMut(f64) -> C64>(
    mut f: F,
    decay_scale: f64,
    opts: &QuadOptions,
) -> Result<C64> {
    if !(decay_scale > 0.0) {
        return Err(Error::domain("quad_semiinfinite", "decay_scale must be positive"));
    }
    let mut total = C64::new(0.0, 0.0);
    let mut err_total = 0.0;
    let mut lo = 0.0;
    let mut len = decay_scale;
    let mut quiet = 0;
    for _ in 0..opts.max_panels {
        let inner = QuadOptions {
            abs_tol: opts.abs_tol.max(0.1 * opts.rel_tol * total.norm()),
            ..*opts
        };
        let (v, e) = quad_finite(&mut f, lo, lo + len, &inner)?;
        total += v;
        err_total += e;
        if v.norm() <= opts.rel_tol * total.norm() + opts.abs_tol {
            quiet += 1;
            if quiet >= 3 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        lo += len;
        len *= 2.0;
    }
    Err(Error::NoConvergence {
        op: "quad_semiinfinite",
        estimate: total.norm(),
        error: err_total,
    })
}

/// `int` of an analytic `f` along the ray `t * exp(i*angle)`, `t` in `[0, inf)`.
/// Rotating onto the steepest-descent direction turns Fresnel-type tails into
/// Gaussian decay.
pub fn quad_ray<F: FnMut(C64) -> C64>(
    mut f: F,
    angle: f64,
    decay_scale: f64,
    opts: &QuadOptions,
) -> Result<C64> {
    let dir = (I * angle).exp();
    Ok(dir * quad_semiinfinite(|t| f(dir * t), decay_scale, opts)?)
}

/// Gauss-Legendre nodes and weights on `[0, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut t = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let prev = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        t[n - 1 - i] = 0.5 * (x + 1.0);
        w[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (t, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exponential_half_line() {
        let v = quad_semiinfinite(|t| C64::from((-t).exp()), 1.0, &QuadOptions::default()).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn finite_polynomial_exact() {
        let (v, _) = quad_finite(|t| C64::from(t.powi(5)), 0.0, 2.0, &QuadOptions::default()).unwrap();
        assert!((v.re - 64.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn fresnel_along_rotated_ray() {
        // int_0^inf exp(i kappa t^2) dt = (1/2) sqrt(pi i / kappa)
        let kappa = C64::new(3.0, 1e-3);
        let v = quad_ray(|z| (I * kappa * z * z).exp(), PI / 4.0, 1.0, &QuadOptions::default()).unwrap();
        let expect = 0.5 * (PI * I / kappa).sqrt();
        assert!((v - expect).norm() < 1e-10 * expect.norm(), "{v} vs {expect}");
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (t, w) = gauss_legendre_unit(12);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let i: f64 = t.iter().zip(&w).map(|(x, w)| w * x.powi(23)).sum();
        assert!((i - 1.0 / 24.0).abs() < 1e-14);
        assert!(t.windows(2).all(|p| p[0] < p[1]));
    }
}
