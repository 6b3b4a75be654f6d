//! Reflection and transmission of a near-cut-off waveguide mode by a thin
//! Neumann screen, computed in the parabolic approximation through embedding
//! formulas, together with a brute-force spectral simulator on the branched
//! surface that serves as an independent oracle.
//!
//! Module map:
//! - [`numerics`]: complex conventions, free Green's function, quadrature.
//! - [`special`]: polylogarithms of order 1/2 and 3/2, zeta values.
//! - [`config`]: geometry, incidence, Floquet orders, regimes, JSON schema.
//! - [`asymptotics`]: segment strengths, lattice sums, closed-form directivities.
//! - [`embedding`]: coefficient formulas, waveguide map, flux audit.
//! - [`simulator`]: spectral marching, numeric directivities, quasi-periodic solver.

pub mod asymptotics;
pub mod config;
pub mod embedding;
pub mod error;
pub mod numerics;
pub mod simulator;
pub mod special;

pub use asymptotics::{BranchRule, DirectivitySet, SegmentStrengths};
pub use config::{IncidenceSpec, ProblemConfig, Regime, RegimeScales, ScreenGeometry};
pub use embedding::{CoefficientTable, FluxAudit};
pub use error::{Error, Result, Warning};
pub use numerics::{ComplexAngle, MediumParams, C64};

/// Crate version recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
