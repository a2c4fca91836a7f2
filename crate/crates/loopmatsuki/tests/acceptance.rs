//! Acceptance criteria, one pass/fail line each. Runs without the test harness so the
//! summary lines are always printed.

use std::process::ExitCode;
use std::time::Instant;

use loopmatsuki::selftest::CRITERIA;

const SEED: u64 = 20240611;

fn main() -> ExitCode {
    // `cargo test -- --list` and name filters come through here as well
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    if let Some(filter) = args.iter().find(|a| !a.starts_with('-')) {
        if !"acceptance".contains(filter.as_str()) {
            return ExitCode::SUCCESS;
        }
    }
    let mut failed = Vec::new();
    for f in CRITERIA {
        let start = Instant::now();
        let r = f(SEED);
        println!("{}  [{:.1}s]", r.line(), start.elapsed().as_secs_f64());
        for msg in &r.failures {
            println!("      {msg}");
        }
        if !r.passed() {
            failed.push(r.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
