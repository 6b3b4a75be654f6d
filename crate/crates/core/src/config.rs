//! Screen geometry, incidence, Floquet orders, regime diagnostics and the
//! JSON configuration schema. Lengths are normalised to `a = 1` by the
//! configuration layer; the geometry type itself accepts any period.

use crate::error::{Error, Result, Warning};
use crate::numerics::{sqrt_upper, AngleBranch, ComplexAngle, MediumParams, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Period `a`, screen width `b`, gap `q = a - b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScreenGeometry {
    pub a: f64,
    pub b: f64,
}

impl ScreenGeometry {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && 0.0 < b && b < a) {
            return Err(Error::Config(format!("need 0 < b < a, got a = {a}, b = {b}")));
        }
        Ok(ScreenGeometry { a, b })
    }

    /// Unit period with gap ratio `epsilon`.
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        Ok(ScreenGeometry { a: 1.0, b: 1.0 - epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        (self.a - self.b) / self.a
    }

    pub fn gap(&self) -> f64 {
        self.a - self.b
    }

    /// Branch-point abscissa: `x_{2m} = a m`, `x_{2m+1} = a m + b`.
    pub fn abscissa(&self, n: i64) -> f64 {
        let m = n.div_euclid(2) as f64;
        if n.rem_euclid(2) == 0 {
            self.a * m
        } else {
            self.a * m + self.b
        }
    }
}

pub const DEFAULT_VALIDITY_CEILING: f64 = 3.0;

/// Incidence slope, waveguide mode index and `ka`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncidenceSpec {
    pub theta_in: ComplexAngle,
    pub mode_index: u32,
    pub ka: f64,
    pub medium: MediumParams,
}

impl IncidenceSpec {
    /// Builds the spec from a real slope. Under absorption the slope is mapped
    /// to `theta * sqrt(k_real/k)` so that `k theta^2` stays real and the
    /// Floquet multiplier is unimodular.
    pub fn new(
        theta_real: f64,
        mode_index: u32,
        ka: f64,
        absorption: f64,
        geometry: &ScreenGeometry,
    ) -> Result<Self> {
        if !(theta_real.is_finite() && theta_real > 0.0) {
            return Err(Error::Config(format!("theta_in must be positive, got {theta_real}")));
        }
        if !(ka.is_finite() && ka > 0.0) {
            return Err(Error::Config(format!("ka must be positive, got {ka}")));
        }
        let medium = MediumParams::new(ka / geometry.a, absorption)?;
        Ok(IncidenceSpec {
            theta_in: ComplexAngle::given(medium.absorbing_angle(theta_real)),
            mode_index,
            ka,
            medium,
        })
    }

    pub fn k(&self) -> C64 {
        self.medium.k()
    }

    pub fn theta(&self) -> C64 {
        self.theta_in.value
    }

    /// Real slope this spec was built from.
    pub fn theta_real(&self) -> f64 {
        (self.k() * self.theta() * self.theta() / self.medium.k_real).re.sqrt()
    }

    /// Helmholtz incidence angle from `1 - theta^2/2 = cos(theta_helmholtz)`.
    pub fn helmholtz_angle(&self) -> f64 {
        let t = self.theta_real();
        (1.0 - 0.5 * t * t).clamp(-1.0, 1.0).acos()
    }

    pub fn validity_warnings(&self, ceiling: f64) -> Vec<Warning> {
        let s = self.ka.sqrt() * self.theta_real();
        if s > ceiling {
            vec![Warning::new(
                "validity_ceiling",
                format!("sqrt(ka)*theta = {s:.4} exceeds the ceiling {ceiling}"),
            )]
        } else {
            Vec::new()
        }
    }
}

/// `psi_n = sqrt(theta^2 + 4 pi n / (k a))` on the decaying branch;
/// `psi_0` is the incidence angle itself.
pub fn floquet_angle(n: i64, spec: &IncidenceSpec, geometry: &ScreenGeometry) -> ComplexAngle {
    if n == 0 {
        return spec.theta_in;
    }
    let k = spec.k();
    let th = spec.theta();
    let z = th * th + 4.0 * PI * n as f64 / (k * geometry.a);
    ComplexAngle {
        value: sqrt_upper(z, k),
        branch: AngleBranch::UpperHalf,
    }
}

/// Orders that propagate without absorption: `theta^2 + 4 pi n/(ka) >= 0`.
pub fn propagating_orders(spec: &IncidenceSpec, n_range: std::ops::RangeInclusive<i64>) -> Vec<i64> {
    let t = spec.theta_real();
    n_range
        .filter(|&n| t * t + 4.0 * PI * n as f64 / spec.ka >= 0.0)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeScales {
    pub crossover: f64,
    pub theta_seg: f64,
    pub diffraction_width: f64,
}

impl RegimeScales {
    pub fn new(ka: f64, geometry: &ScreenGeometry) -> Self {
        let k = ka / geometry.a;
        let q = geometry.gap();
        RegimeScales {
            crossover: (geometry.epsilon() / ka).sqrt(),
            theta_seg: (k * q).powf(-0.5),
            diffraction_width: (q / k).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Transmission,
    Crossover,
    Reflection,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Transmission => "transmission",
            Regime::Crossover => "crossover",
            Regime::Reflection => "reflection",
        }
    }
}

/// Band half-width (as a factor around the crossover slope).
pub const REGIME_BAND: f64 = 3.0;

pub fn regime_classify(spec: &IncidenceSpec, geometry: &ScreenGeometry) -> (Regime, Vec<Warning>) {
    let scales = RegimeScales::new(spec.ka, geometry);
    let t = spec.theta_real();
    let mut warnings = Vec::new();
    if geometry.epsilon() > 0.2 {
        warnings.push(Warning::new(
            "large_gap",
            format!("epsilon = {} is not small", geometry.epsilon()),
        ));
    }
    let r = if t < scales.crossover / REGIME_BAND {
        Regime::Transmission
    } else if t > REGIME_BAND * scales.crossover {
        Regime::Reflection
    } else {
        Regime::Crossover
    };
    (r, warnings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaScan {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl ThetaScan {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(Error::Config("theta_scan.count is 0: empty theta grid".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0 && self.min <= self.max) {
            return Err(Error::Config(format!(
                "theta_scan needs 0 < min <= max, got min = {}, max = {}",
                self.min, self.max
            )));
        }
        if self.count == 1 {
            return Ok(vec![self.min]);
        }
        let n = (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                if i + 1 == self.count {
                    return self.max;
                }
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log if i == 0 => self.min,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect())
    }
}

/// Simulator discretisation overrides; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulatorSettings {
    /// Transverse half-width of the grid in units of `a`.
    pub half_width: f64,
    /// Grid steps per diffraction width `sqrt(q/k)`.
    pub steps_per_width: f64,
    /// Periods marched for numeric directivities.
    pub cells: usize,
}

impl Default for SimulatorSettings {
    fn default() -> Self {
        SimulatorSettings {
            half_width: 40.0,
            steps_per_width: 16.0,
            cells: 200,
        }
    }
}

/// Top-level JSON configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub ka: f64,
    pub epsilon: f64,
    pub m: u32,
    pub absorption: f64,
    pub theta_scan: ThetaScan,
    #[serde(default = "default_ceiling")]
    pub validity_ceiling: f64,
    #[serde(default)]
    pub simulator: SimulatorSettings,
}

fn default_ceiling() -> f64 {
    DEFAULT_VALIDITY_CEILING
}

impl ProblemConfig {
    pub fn geometry(&self) -> Result<ScreenGeometry> {
        ScreenGeometry::from_epsilon(self.epsilon)
    }

    /// `epsilon = 0`: the screens close up and the sheets decouple.
    pub fn closed_screen(&self) -> bool {
        self.epsilon == 0.0
    }

    pub fn incidence(&self, theta: f64) -> Result<IncidenceSpec> {
        let g = if self.closed_screen() {
            ScreenGeometry { a: 1.0, b: 1.0 }
        } else {
            self.geometry()?
        };
        IncidenceSpec::new(theta, self.m, self.ka, self.absorption, &g)
    }

    /// Checks everything that does not depend on the pipeline.
    pub fn validate(&self) -> Result<()> {
        if !(self.ka.is_finite() && self.ka > 0.0) {
            return Err(Error::Config(format!("ka must be positive, got {}", self.ka)));
        }
        if !self.closed_screen() {
            self.geometry()?;
        }
        MediumParams::new(self.ka, self.absorption)?;
        if !(self.validity_ceiling > 0.0) {
            return Err(Error::Config("validity_ceiling must be positive".into()));
        }
        let s = &self.simulator;
        if !(s.half_width > 0.0 && s.steps_per_width >= 1.0 && s.cells >= 8) {
            return Err(Error::Config(
                "simulator settings need half_width > 0, steps_per_width >= 1, cells >= 8".into(),
            ));
        }
        self.theta_scan.grid()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(theta: f64) -> (IncidenceSpec, ScreenGeometry) {
        let g = ScreenGeometry::from_epsilon(0.05).unwrap();
        (IncidenceSpec::new(theta, 31, 100.0, 0.0, &g).unwrap(), g)
    }

    #[test]
    fn floquet_examples() {
        let (s, g) = reference(0.045);
        assert_eq!(floquet_angle(0, &s, &g).value, s.theta());
        let p1 = floquet_angle(1, &s, &g).value;
        assert!((p1.re - 0.357_335_6).abs() < 5e-8 && p1.im == 0.0);
        let m1 = floquet_angle(-1, &s, &g).value;
        assert!((m1 - C64::new(0.0, 0.351_623_0)).norm() < 5e-8);
    }

    #[test]
    fn propagating_examples() {
        let (s, _) = reference(0.045);
        assert_eq!(propagating_orders(&s, -3..=3), vec![0, 1, 2, 3]);
        let g = ScreenGeometry::from_epsilon(0.05).unwrap();
        let s = IncidenceSpec::new(0.1, 0, 1e6, 0.0, &g).unwrap();
        assert_eq!(propagating_orders(&s, -3..=3).len(), 7);
    }

    #[test]
    fn regime_examples() {
        assert_eq!(regime_classify(&reference(0.0022).0, &reference(0.0022).1).0, Regime::Transmission);
        assert_eq!(regime_classify(&reference(0.3).0, &reference(0.3).1).0, Regime::Reflection);
        assert_eq!(regime_classify(&reference(0.02236).0, &reference(0.02236).1).0, Regime::Crossover);
    }

    #[test]
    fn abscissae() {
        let g = ScreenGeometry::from_epsilon(0.05).unwrap();
        assert_eq!(g.abscissa(0), 0.0);
        assert!((g.abscissa(1) - 0.95).abs() < 1e-15);
        assert_eq!(g.abscissa(2), 1.0);
        assert!((g.abscissa(-1) + 0.05).abs() < 1e-15);
    }

    #[test]
    fn empty_grid_is_config_error() {
        let s = ThetaScan { min: 1e-3, max: 0.3, count: 0, spacing: Spacing::Log };
        assert!(s.grid().unwrap_err().is_config());
    }
}
