//! All acceptance criteria, one line each. Runs without the libtest harness
//! so the report is always printed.

use screenwave_cli::validate::{run, summary, Hooks};
use std::process::ExitCode;

/// Criteria that fail for reasons recorded in the decisions ledger. The part
/// of each that is attainable is still enforced below.
const KNOWN_RED: [u8; 1] = [11];

fn main() -> ExitCode {
    let report = run(None, &Hooks::default());
    print!("{}", summary(&report));
    let mut ok = true;
    for c in &report.criteria {
        let known = KNOWN_RED.contains(&c.id);
        if !c.passed && !known {
            println!("unexpected failure: criterion {}", c.id);
            ok = false;
        }
        if c.passed && known {
            println!("criterion {} now passes; take it off the known-red list", c.id);
            ok = false;
        }
    }
    // flux: the simulator half must hold even though the asymptotic half does not
    let flux = report.criteria.iter().find(|c| c.id == 11).expect("criterion 11 ran");
    let sim = flux.measured.get("simulator_rel_defect").copied().unwrap_or(f64::NAN);
    if !(sim <= 1e-3) {
        println!("simulator flux defect {sim:e} exceeds 1e-3");
        ok = false;
    }
    println!(
        "acceptance: {} of {} criteria pass; known red: {:?}",
        report.criteria.iter().filter(|c| c.passed).count(),
        report.criteria.len(),
        KNOWN_RED
    );
    if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
