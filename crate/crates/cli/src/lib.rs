//! Command implementations for the `screenwave` binary.

pub mod csv;
pub mod pipeline;
pub mod svg;
pub mod validate;

use pipeline::{OracleRow, ScanRow};
use screenwave::{BranchRule, ProblemConfig};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};
use thiserror::Error;

/// Wall-clock budget of an oracle run; exceeding it only warns.
pub const ORACLE_BUDGET: Duration = Duration::from_secs(600);
/// Allowed absolute gap between simulator and asymptotic `|Twg[0]|`, `|Rwg[0]|`
/// under `oracle --strict`.
pub const STRICT_BAND: f64 = 0.05;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Validation(_) => 4,
        }
    }
}

impl From<screenwave::Error> for CliError {
    fn from(e: screenwave::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Reads and validates a configuration; returns it with its hash.
pub fn load_config(path: &Path) -> CliResult<(ProblemConfig, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg: ProblemConfig = serde_json::from_str(&text).map_err(|e| {
        CliError::Config(format!("{} line {} column {}: {e}", path.display(), e.line(), e.column()))
    })?;
    cfg.validate()?;
    let canonical = serde_json::to_string(&cfg).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok((cfg, csv::config_hash(&canonical)))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn svg_path(out: Option<&Path>) -> CliResult<PathBuf> {
    out.map(|p| p.with_extension("svg"))
        .ok_or_else(|| CliError::Config("--svg needs --out to place the plot".into()))
}

fn order_zero(rows: &[ScanRow], pick: fn(&screenwave::CoefficientTable, usize) -> f64) -> Vec<(f64, f64)> {
    rows.iter()
        .filter_map(|r| r.table.index(0).map(|i| (r.theta_in, pick(&r.table, i))))
        .collect()
}

fn abs_twg(t: &screenwave::CoefficientTable, i: usize) -> f64 {
    t.twg[i].norm()
}

fn abs_rwg(t: &screenwave::CoefficientTable, i: usize) -> f64 {
    t.rwg[i].norm()
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub strict: bool,
    pub jobs: usize,
}

/// Asymptotic scan. Under `strict`, any validity warning fails the run after
/// the table has been written.
pub fn scan(config: &Path, opts: &RunOptions) -> CliResult<Vec<ScanRow>> {
    let (cfg, hash) = load_config(config)?;
    let log_x = matches!(cfg.theta_scan.spacing, screenwave::config::Spacing::Log);
    let rows = pipeline::run_scan(&cfg, opts.jobs, BranchRule::Principal)?;
    emit(opts.out.as_deref(), &csv::scan_csv(&rows, &hash))?;
    if opts.svg {
        let plot = svg::plot(
            "asymptotic order-0 coefficients",
            "theta_in",
            log_x,
            &[
                svg::Series { label: "|Twg0|", colour: "#1f77b4", points: order_zero(&rows, abs_twg) },
                svg::Series { label: "|Rwg0|", colour: "#d62728", points: order_zero(&rows, abs_rwg) },
            ],
        );
        emit(Some(&svg_path(opts.out.as_deref())?), &plot)?;
    }
    let flagged = rows.iter().filter(|r| !r.warnings.is_empty()).count();
    if opts.strict && flagged > 0 {
        return Err(CliError::Validation(format!("{flagged} slopes carry validity warnings")));
    }
    Ok(rows)
}

/// Largest `| |Twg0| - |Twg0_asym| |` or `| |Rwg0| - |Rwg0_asym| |` of a row.
pub fn oracle_mismatch(row: &OracleRow) -> f64 {
    let (s, a) = (&row.scan.table, &row.asymptotic);
    match (s.index(0), a.index(0)) {
        (Some(i), Some(j)) => (s.twg[i].norm() - a.twg[j].norm())
            .abs()
            .max((s.rwg[i].norm() - a.rwg[j].norm()).abs()),
        _ => 0.0,
    }
}

/// Simulator oracle. Under `strict`, a mismatch with the asymptotic pipeline
/// beyond [`STRICT_BAND`] fails the run after the table has been written.
pub fn oracle(config: &Path, opts: &RunOptions) -> CliResult<Vec<OracleRow>> {
    let (cfg, hash) = load_config(config)?;
    let log_x = matches!(cfg.theta_scan.spacing, screenwave::config::Spacing::Log);
    let t0 = Instant::now();
    let rows = pipeline::run_oracle(&cfg, opts.jobs)?;
    let mut global = Vec::new();
    let elapsed = t0.elapsed();
    if elapsed > ORACLE_BUDGET {
        let msg = format!(
            "oracle_budget: run took {:.0} s, over the {} s budget",
            elapsed.as_secs_f64(),
            ORACLE_BUDGET.as_secs()
        );
        eprintln!("warning: {msg}");
        global.push(msg);
    }
    emit(opts.out.as_deref(), &csv::oracle_csv(&rows, &hash, &global))?;
    if opts.svg {
        let scans: Vec<ScanRow> = rows.iter().map(|r| r.scan.clone()).collect();
        let asym: Vec<ScanRow> = rows
            .iter()
            .map(|r| ScanRow { table: r.asymptotic.clone(), ..r.scan.clone() })
            .collect();
        let plot = svg::plot(
            "simulator vs asymptotic order-0 coefficients",
            "theta_in",
            log_x,
            &[
                svg::Series { label: "|Twg0| simulator", colour: "#1f77b4", points: order_zero(&scans, abs_twg) },
                svg::Series { label: "|Rwg0| simulator", colour: "#d62728", points: order_zero(&scans, abs_rwg) },
                svg::Series { label: "|Twg0| asymptotic", colour: "#aec7e8", points: order_zero(&asym, abs_twg) },
                svg::Series { label: "|Rwg0| asymptotic", colour: "#ff9896", points: order_zero(&asym, abs_rwg) },
            ],
        );
        emit(Some(&svg_path(opts.out.as_deref())?), &plot)?;
    }
    if opts.strict {
        let worst = rows.iter().map(oracle_mismatch).fold(0.0, f64::max);
        if worst > STRICT_BAND {
            return Err(CliError::Validation(format!(
                "simulator and asymptotic order-0 magnitudes differ by {worst:.4} (band {STRICT_BAND})"
            )));
        }
    }
    Ok(rows)
}

/// Acceptance report as JSON; fails when any selected criterion fails.
pub fn validate(filter: Option<&str>, hooks: &validate::Hooks, out: Option<&Path>) -> CliResult<validate::Report> {
    if let Some(f) = filter {
        let keys = validate::filter_keys();
        if !keys.contains(&f) && !(1..=12).any(|i: u8| i.to_string() == f) {
            return Err(CliError::Config(format!("unknown filter {f:?}; known: {}", keys.join(", "))));
        }
    }
    let report = validate::run(filter, hooks);
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Runtime(e.to_string()))?;
    emit(out, &(json + "\n"))?;
    eprint!("{}", validate::summary(&report));
    if report.passed {
        Ok(report)
    } else {
        let failed: Vec<String> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
        Err(CliError::Validation(format!("criteria {} failed", failed.join(", "))))
    }
}
