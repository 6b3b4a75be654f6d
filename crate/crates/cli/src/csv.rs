//! Deterministic CSV emission.

use crate::pipeline::{OracleRow, ScanRow};
use screenwave::C64;
use sha2::{Digest, Sha256};
use std::fmt::Write;

/// 17 significant digits, `.` decimal, no locale.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// Hex SHA-256 of the canonical (re-serialised) configuration.
pub fn config_hash(canonical_json: &str) -> String {
    let digest = Sha256::digest(canonical_json.as_bytes());
    digest.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub const COLUMNS: [&str; 17] = [
    "theta_in", "n", "mode_index", "R1_re", "R1_im", "T1_re", "T1_im", "R2_re", "R2_im", "T2_re",
    "T2_im", "Twg_re", "Twg_im", "Rwg_re", "Rwg_im", "flux_defect", "regime_label",
];

pub const RESIDUAL_COLUMNS: [&str; 6] = [
    "resid_R1_embedded", "resid_T1_embedded", "resid_R1_asymptotic", "resid_T1_asymptotic",
    "reciprocity_0", "reciprocity_1",
];

fn header(out: &mut String, pipeline: &str, hash: &str, global: &[String], warnings: &[(f64, String)]) {
    let _ = writeln!(out, "# screenwave {pipeline} table");
    let _ = writeln!(out, "# config_sha256: {hash}");
    let _ = writeln!(
        out,
        "# versions: screenwave {}, screenwave-cli {}",
        screenwave::VERSION,
        env!("CARGO_PKG_VERSION")
    );
    if warnings.is_empty() && global.is_empty() {
        let _ = writeln!(out, "# warnings: none");
    }
    for w in global {
        let _ = writeln!(out, "# warning: {w}");
    }
    for (t, w) in warnings {
        let _ = writeln!(out, "# warning theta_in={}: {w}", num(*t));
    }
}

fn collect_warnings<'a>(rows: impl Iterator<Item = &'a ScanRow>) -> Vec<(f64, String)> {
    let mut out = Vec::new();
    for r in rows {
        let mut seen: Vec<String> = r.warnings.iter().map(|w| w.to_string()).collect();
        seen.sort();
        seen.dedup();
        out.extend(seen.into_iter().map(|w| (r.theta_in, w)));
    }
    out
}

fn push_c(cells: &mut Vec<String>, z: C64) {
    cells.push(num(z.re));
    cells.push(num(z.im));
}

fn base_cells(r: &ScanRow, i: usize, n: i64) -> Vec<String> {
    let t = &r.table;
    let mut cells = vec![num(r.theta_in), n.to_string(), t.mode_index[i].to_string()];
    for z in [t.r1[i], t.t1[i], t.r2[i], t.t2[i], t.twg[i], t.rwg[i]] {
        push_c(&mut cells, z);
    }
    cells.push(num(r.flux.relative_defect()));
    cells.push(r.regime.label().to_string());
    cells
}

pub fn scan_csv(rows: &[ScanRow], hash: &str) -> String {
    let mut out = String::new();
    header(&mut out, "asymptotic", hash, &[], &collect_warnings(rows.iter()));
    let _ = writeln!(out, "{}", COLUMNS.join(","));
    for r in rows {
        for (i, n) in r.table.orders().enumerate() {
            let _ = writeln!(out, "{}", base_cells(r, i, n).join(","));
        }
    }
    out
}

fn rel(a: C64, b: C64) -> f64 {
    if a.norm() == 0.0 {
        (a - b).norm()
    } else {
        (a - b).norm() / a.norm()
    }
}

/// `global` carries run-level warnings such as an exceeded time budget.
pub fn oracle_csv(rows: &[OracleRow], hash: &str, global: &[String]) -> String {
    let mut out = String::new();
    header(&mut out, "simulator", hash, global, &collect_warnings(rows.iter().map(|r| &r.scan)));
    let cols: Vec<&str> = COLUMNS.iter().chain(RESIDUAL_COLUMNS.iter()).copied().collect();
    let _ = writeln!(out, "{}", cols.join(","));
    for r in rows {
        let t = &r.scan.table;
        for (i, n) in t.orders().enumerate() {
            let mut cells = base_cells(&r.scan, i, n);
            let e = r.embedded.index(n);
            let a = r.asymptotic.index(n);
            let pick = |tab: &screenwave::CoefficientTable, j: Option<usize>, f: fn(&screenwave::CoefficientTable) -> &Vec<C64>, own: C64| {
                j.map(|j| rel(own, f(tab)[j])).unwrap_or(f64::NAN)
            };
            cells.push(num(pick(&r.embedded, e, |t| &t.r1, t.r1[i])));
            cells.push(num(pick(&r.embedded, e, |t| &t.t1, t.t1[i])));
            cells.push(num(pick(&r.asymptotic, a, |t| &t.r1, t.r1[i])));
            cells.push(num(pick(&r.asymptotic, a, |t| &t.t1, t.t1[i])));
            cells.push(num(r.reciprocity[0]));
            cells.push(num(r.reciprocity[1]));
            let _ = writeln!(out, "{}", cells.join(","));
        }
    }
    out
}
