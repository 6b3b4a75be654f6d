//! Polylogarithms of order 1/2 and 3/2 on the closed unit disk, their
//! small-argument asymptotics, and the zeta values they need.

use crate::error::{Error, Result};
use crate::numerics::C64;
use std::f64::consts::PI;

/// The two polylogarithm orders used by the lattice sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolylogOrder {
    Half,
    ThreeHalves,
}

impl PolylogOrder {
    pub fn s(self) -> f64 {
        match self {
            PolylogOrder::Half => 0.5,
            PolylogOrder::ThreeHalves => 1.5,
        }
    }
}

// B_2, B_4, ..., B_24
const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Gamma function at `x = two_x / 2` (integers and half-integers).
pub fn gamma_half(two_x: i64) -> Result<f64> {
    if two_x <= 0 && two_x % 2 == 0 {
        return Err(Error::Pole { op: "gamma" });
    }
    // start from Gamma(1) = 1 or Gamma(1/2) = sqrt(pi) and walk
    let (mut g, mut cur) = if two_x % 2 == 0 { (1.0, 2i64) } else { (PI.sqrt(), 1i64) };
    while cur < two_x {
        g *= cur as f64 / 2.0;
        cur += 2;
    }
    while cur > two_x {
        cur -= 2;
        g /= cur as f64 / 2.0;
    }
    Ok(g)
}

/// Riemann zeta for real `s != 1`. Positive arguments use Euler-Maclaurin;
/// negative ones the functional equation, which needs `2s` integral.
pub fn zeta(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::Pole { op: "zeta" });
    }
    if s >= 0.5 {
        return Ok(zeta_em(s));
    }
    let two_s = 2.0 * s;
    if two_s.fract() != 0.0 {
        return Err(Error::domain(
            "zeta",
            format!("negative argument {s} must be an integer or half-integer"),
        ));
    }
    if s == 0.0 {
        return Ok(-0.5);
    }
    // zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
    let sin = (PI * s / 2.0).sin();
    if s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return Ok(0.0);
    }
    let g = gamma_half((2.0 - two_s) as i64)?;
    Ok(2f64.powf(s) * PI.powf(s - 1.0) * sin * g * zeta_em(1.0 - s))
}

fn zeta_em(s: f64) -> f64 {
    const N: usize = 20;
    let n = N as f64;
    let mut sum: f64 = (1..N).map(|j| (j as f64).powf(-s)).sum();
    sum += 0.5 * n.powf(-s) + n.powf(1.0 - s) / (s - 1.0);
    // B_2j/(2j)! * s(s+1)...(s+2j-2) * N^(-s-2j+1)
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        let jj = j + 1;
        sum += b / fact * rising * npow;
        let t = 2 * jj;
        rising *= (s + t as f64 - 1.0) * (s + t as f64);
        fact *= ((t + 1) * (t + 2)) as f64;
        npow /= n * n;
    }
    sum
}

/// `Li_s(z) = sum_{n>=1} z^n / n^s` for `|z| <= 1`.
///
/// Plain series for `|z| <= 0.5`; beyond that the expansion in
/// `mu = ln z`, `Gamma(1-s)(-mu)^(s-1) + sum_k zeta(s-k) mu^k / k!`, which
/// converges for `|mu| < 2 pi` and stays accurate up to the unit circle.
pub fn polylog(order: PolylogOrder, z: C64) -> Result<C64> {
    let r = z.norm();
    if !r.is_finite() || r > 1.0 + 1e-12 {
        return Err(Error::domain("polylog", format!("|z| = {r} exceeds 1")));
    }
    if r <= 0.5 {
        return Ok(polylog_series(order.s(), z, 1e-17, 1000));
    }
    polylog_log_expansion(order, z.ln())
}

/// Direct partial sums over at most `max_terms` terms, stopping early once
/// the geometric remainder bound drops below `tol` relative.
pub fn polylog_series(s: f64, z: C64, tol: f64, max_terms: usize) -> C64 {
    let r = z.norm();
    let mut sum = C64::new(0.0, 0.0);
    let mut zn = z;
    for n in 1..=max_terms {
        let term = zn / (n as f64).powf(s);
        sum += term;
        if r < 1.0 && term.norm() * r / (1.0 - r) <= tol * sum.norm() {
            break;
        }
        zn *= z;
    }
    sum
}

/// Expansion in `mu = ln z`; valid for `|mu| < 2 pi`.
pub fn polylog_log_expansion(order: PolylogOrder, mu: C64) -> Result<C64> {
    let s = order.s();
    if mu.norm() >= 2.0 * PI {
        return Err(Error::domain("polylog", "|ln z| must stay below 2 pi"));
    }
    if mu.norm() == 0.0 {
        return match order {
            PolylogOrder::Half => Err(Error::Pole { op: "polylog(1/2, 1)" }),
            PolylogOrder::ThreeHalves => zeta(1.5).map(C64::from),
        };
    }
    let g = gamma_half((2.0 - 2.0 * s) as i64)?;
    let mut sum = g * (-mu).powf(s - 1.0);
    let mut pow = C64::new(1.0, 0.0);
    let mut quiet = 0;
    for k in 0..120 {
        let term = zeta(s - k as f64)? * pow;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        pow = pow * mu / (k + 1) as f64;
    }
    Ok(sum)
}

/// How many terms of the small-`mu` expansion of `Li_{1/2}(e^mu)` to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticTerms {
    /// `sqrt(pi) (-mu)^(-1/2)` only.
    Leading,
    /// Leading term plus the constant `zeta(1/2)`.
    WithConstant,
}

/// Small-`mu` form of `Li_{1/2}(e^mu)` with the principal branch of
/// `(-mu)^(-1/2)`.
pub fn polylog_asymptotic_halforder(mu: C64, terms: AsymptoticTerms) -> Result<C64> {
    let m = mu.norm();
    if m == 0.0 {
        return Err(Error::Pole { op: "polylog_asymptotic_halforder" });
    }
    if m > 0.1 {
        return Err(Error::domain(
            "polylog_asymptotic_halforder",
            format!("|mu| = {m} is outside the small-argument range (0, 0.1]"),
        ));
    }
    if mu.re > 0.0 && mu.im < 0.0 {
        return Err(Error::domain(
            "polylog_asymptotic_halforder",
            "mu must satisfy Im mu >= 0 or Re mu <= 0",
        ));
    }
    let lead = PI.sqrt() * (-mu).powf(-0.5);
    Ok(match terms {
        AsymptoticTerms::Leading => lead,
        AsymptoticTerms::WithConstant => lead + zeta(0.5)?,
    })
}
