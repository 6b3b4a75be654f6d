//! Per-angle evaluation for `scan` and `oracle`.

use screenwave::config::{regime_classify, ScreenGeometry};
use screenwave::embedding::{
    asymptotic_table, closed_screen_table, default_window, flux_audit, flux_audit_extrapolated,
};
use screenwave::simulator::{
    grid_for, reciprocity_defect, solve_quasi_periodic, EdgeMarchOptions, EdgeRuns, Propagator,
    SolverOptions,
};
use screenwave::{BranchRule, CoefficientTable, Error, FluxAudit, ProblemConfig, Regime, Result, Warning};

/// Orders extracted from the solver for the flux audit.
pub const SOLVER_ORDERS: i64 = 200;
/// Orders averaged when extrapolating the flux tail.
pub const FLUX_FIT_ORDERS: usize = 40;

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub theta_in: f64,
    pub table: CoefficientTable,
    pub flux: FluxAudit,
    pub regime: Regime,
    pub warnings: Vec<Warning>,
}

/// Residuals of the simulator table against the two embedding pipelines.
#[derive(Debug, Clone)]
pub struct OracleRow {
    pub scan: ScanRow,
    /// Embedding formulas fed with marched directivities.
    pub embedded: CoefficientTable,
    pub asymptotic: CoefficientTable,
    pub reciprocity: [f64; 2],
    pub matvecs: usize,
}

fn closed_geometry() -> ScreenGeometry {
    ScreenGeometry { a: 1.0, b: 1.0 }
}

pub fn scan_point(cfg: &ProblemConfig, theta: f64, branch: BranchRule) -> Result<ScanRow> {
    let spec = cfg.incidence(theta)?;
    let mut warnings = spec.validity_warnings(cfg.validity_ceiling);
    if cfg.closed_screen() {
        let geom = closed_geometry();
        let table = closed_screen_table(&spec, &geom, default_window(&spec));
        return Ok(ScanRow {
            theta_in: theta,
            flux: flux_audit(&table, &spec),
            table,
            regime: Regime::Reflection,
            warnings,
        });
    }
    let geom = cfg.geometry()?;
    let (regime, w) = regime_classify(&spec, &geom);
    warnings.extend(w);
    let (table, w) = asymptotic_table(&spec, &geom, default_window(&spec), branch)?;
    warnings.extend(w);
    Ok(ScanRow {
        theta_in: theta,
        flux: flux_audit(&table, &spec),
        table,
        regime,
        warnings,
    })
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))
}

/// Asymptotic pipeline over the configured grid, rows in grid order.
pub fn run_scan(cfg: &ProblemConfig, jobs: usize, branch: BranchRule) -> Result<Vec<ScanRow>> {
    use rayon::prelude::*;
    cfg.validate()?;
    let grid = cfg.theta_scan.grid()?;
    pool(jobs)?.install(|| grid.par_iter().map(|&t| scan_point(cfg, t, branch)).collect())
}

/// Simulator pipeline: one pair of edge marches per configuration, one
/// quasi-periodic solve per angle.
pub fn run_oracle(cfg: &ProblemConfig, jobs: usize) -> Result<Vec<OracleRow>> {
    use rayon::prelude::*;
    cfg.validate()?;
    if !(cfg.absorption > 0.0) {
        return Err(Error::Config("oracle runs need a positive absorption".into()));
    }
    let thetas = cfg.theta_scan.grid()?;
    if cfg.closed_screen() {
        return thetas
            .iter()
            .map(|&t| {
                let scan = scan_point(cfg, t, BranchRule::Principal)?;
                Ok(OracleRow {
                    embedded: scan.table.clone(),
                    asymptotic: scan.table.clone(),
                    scan,
                    reciprocity: [0.0, 0.0],
                    matvecs: 0,
                })
            })
            .collect();
    }
    let geom = cfg.geometry()?;
    let spec0 = cfg.incidence(thetas[0])?;
    let grid = grid_for(&spec0, &geom, &cfg.simulator)?;
    let march = EdgeMarchOptions {
        cells: cfg.simulator.cells,
        ..EdgeMarchOptions::default()
    };
    let runs = EdgeRuns::march(&mut Propagator::new(grid.clone()), &geom, &march)?;
    pool(jobs)?.install(|| {
        thetas
            .par_iter()
            .map(|&theta| {
                let spec = cfg.incidence(theta)?;
                let window = default_window(&spec);
                let mut warnings = spec.validity_warnings(cfg.validity_ceiling);
                let (regime, w) = regime_classify(&spec, &geom);
                warnings.extend(w);
                let lowest = *window.start() + 4;
                let opts = SolverOptions {
                    n_max: SOLVER_ORDERS.max(*window.end()),
                    samples: 1024,
                    ..SolverOptions::default()
                };
                let mut prop = Propagator::new(grid.clone());
                let solved = solve_quasi_periodic(&mut prop, &spec, &geom, lowest, &opts)?;
                warnings.extend(solved.warnings.iter().cloned());
                let flux = flux_audit_extrapolated(&solved.table, &spec, FLUX_FIT_ORDERS)?;
                let table = solved.table.restrict(window.clone())?;
                let embedded = runs.table(&spec, &geom, table.orders())?;
                let (asymptotic, _) = asymptotic_table(&spec, &geom, table.orders(), BranchRule::Principal)?;
                let d = runs.set_at(spec.theta_in, spec.theta_in)?;
                let reciprocity = reciprocity_defect(&solved, d.v0, d.v1, &spec, &geom);
                Ok(OracleRow {
                    scan: ScanRow {
                        theta_in: theta,
                        table,
                        flux,
                        regime,
                        warnings,
                    },
                    embedded,
                    asymptotic,
                    reciprocity,
                    matvecs: solved.matvecs,
                })
            })
            .collect()
    })
}
