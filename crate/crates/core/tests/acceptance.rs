//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Tolerances live in `clusterstab::verify` as constants.

use std::process::ExitCode;

use clusterstab::verify::{criterion_10, linear_regime_passed, run_criterion, CriterionReport, VerifyConfig};

fn line(rep: &CriterionReport) {
    let status = if rep.passed { "PASS" } else { "FAIL" };
    println!("criterion {:>2} {status} {}", rep.id, rep.name);
    for c in rep.checks.iter().filter(|c| !c.passed) {
        println!("    failed: {} (expected {}, observed {})", c.label, c.expected, c.observed);
    }
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let mut reports = Vec::new();
    for id in 1..=9 {
        match run_criterion(id, &cfg) {
            Ok(rep) => {
                line(&rep);
                if let Some(ok) = linear_regime_passed(&rep) {
                    let grid = cfg.linear_regime_delays.as_deref().unwrap_or("");
                    println!(
                        "    linear-regime grid {grid} µs (ungraded): {}",
                        if ok { "pass" } else { "fail" }
                    );
                }
                reports.push(rep);
            }
            Err(e) => {
                println!("criterion {id:>2} FAIL error: {e}");
                return ExitCode::FAILURE;
            }
        }
    }
    match criterion_10(&cfg, &reports) {
        Ok(rep) => {
            line(&rep);
            reports.push(rep);
        }
        Err(e) => {
            println!("criterion 10 FAIL error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", reports.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
