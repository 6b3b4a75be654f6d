use super::C64;
use std::f64::consts::PI;

/// Complex error function: Taylor series for `|z| <= 3`, Laplace continued
/// fraction for `erfc` otherwise (reflected into `Re z >= 0`).
pub fn erf(z: C64) -> C64 {
    if z.norm() <= 3.0 {
        let z2 = z * z;
        let mut term = z;
        let mut sum = z;
        for n in 1..200 {
            term = -term * z2 / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        sum * (2.0 / PI.sqrt())
    } else if z.re < 0.0 {
        -erf(-z)
    } else {
        let mut t = z;
        for n in (1..=120).rev() {
            t = z + (n as f64 * 0.5) / t;
        }
        let erfc = (-z * z).exp() / (PI.sqrt() * t);
        C64::new(1.0, 0.0) - erfc
    }
}
