//! Split-step Fourier marching on the two-sheet surface: edge Green's
//! functions for numeric directivities and a steady quasi-periodic solver
//! for reference coefficients.

mod edge;
mod grid;
mod solver;

pub use edge::{
    directivity_numeric, edge_green_march, extended_directivity_numeric, far_field_ratio,
    EdgeGreenRun, EdgeMarchOptions, GapSamples, NumericDirectivity,
};
pub use grid::{apply_cut, FieldSlice, GridSpec, Propagator, SheetConvention, SimGrid};
pub use solver::{
    gmres, reciprocity_defect, solve_quasi_periodic, GmresOptions, GmresOutcome, SolverOptions,
    SolverResult,
};

use crate::asymptotics::DirectivitySet;
use crate::config::{floquet_angle, IncidenceSpec, ScreenGeometry, SimulatorSettings};
use crate::embedding::{table_from_directivities, CoefficientTable};
use crate::error::Result;
use crate::numerics::{ComplexAngle, I};

/// Grid built from the configuration's simulator settings.
pub fn grid_for(spec: &IncidenceSpec, geometry: &ScreenGeometry, settings: &SimulatorSettings) -> Result<SimGrid> {
    let g = GridSpec::for_gap(
        geometry.gap(),
        spec.medium.k_real,
        settings.half_width * geometry.a,
        settings.steps_per_width,
    );
    SimGrid::new(g, spec.k())
}

/// Both edge runs for one medium; reusable for every incidence slope.
pub struct EdgeRuns {
    pub runs: [EdgeGreenRun; 2],
}

impl EdgeRuns {
    pub fn march(prop: &mut Propagator, geometry: &ScreenGeometry, opts: &EdgeMarchOptions) -> Result<Self> {
        let r0 = edge_green_march(prop, 0, geometry, opts)?;
        let r1 = edge_green_march(prop, 1, geometry, opts)?;
        Ok(EdgeRuns { runs: [r0, r1] })
    }

    /// Directivities at `phi` for incidence `theta`, as the embedding formulas
    /// consume them. `v0` is referred to its own edge (the head phase
    /// `e^{ikq(phi^2-theta^2)/2}` is divided out, which is 1 at `phi = theta`);
    /// the primes are `phi` derivatives of the marched series.
    pub fn set_at(&self, theta: ComplexAngle, phi: ComplexAngle) -> Result<DirectivitySet> {
        let (th, ph) = (theta.value, phi.value);
        let d0 = extended_directivity_numeric(&self.runs[0], th, ph)?;
        let d1 = extended_directivity_numeric(&self.runs[1], th, ph)?;
        let k = self.runs[0].k;
        let q = self.runs[0].geometry.gap();
        let head = (I * k * q * (ph * ph - th * th) / 2.0).exp();
        Ok(DirectivitySet {
            v0: d0.value / head,
            v1: d1.value,
            v0_prime: d0.derivative,
            v1_prime: d1.derivative,
            theta: phi,
        })
    }

    /// Embedding table fed with marched directivities.
    pub fn table(
        &self,
        spec: &IncidenceSpec,
        geometry: &ScreenGeometry,
        window: std::ops::RangeInclusive<i64>,
    ) -> Result<CoefficientTable> {
        table_from_directivities(spec, geometry, window, |n| {
            self.set_at(spec.theta_in, floquet_angle(n, spec, geometry))
        })
    }
}
