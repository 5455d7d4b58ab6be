//! Runs every acceptance criterion and prints one PASS/FAIL line each.
//!
//! Built without the libtest harness so the lines are never captured.
//! Exits non-zero when any criterion fails or errors. Criterion ids given on
//! the command line restrict the run.

use std::process::ExitCode;
use std::time::Instant;

use deloc_core::suite::{run_criterion, SuiteConfig, CRITERIA};

fn main() -> ExitCode {
    let ids: Vec<u8> = CRITERIA.iter().map(|(i, _)| *i).collect();
    assert_eq!(ids, (1..=10).collect::<Vec<_>>(), "criteria table out of order");
    let wanted: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let cfg = SuiteConfig::default();
    let mut failed = 0;
    for (id, title) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        match run_criterion(id, &cfg) {
            Ok(report) => {
                println!("{} [{:.2}s]", report.line(), start.elapsed().as_secs_f64());
                for note in &report.notes {
                    println!("    {note}");
                }
                failed += usize::from(!report.passed);
            }
            Err(e) => {
                println!("criterion {id:>2} FAIL  {title} (error: {e})");
                failed += 1;
            }
        }
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
