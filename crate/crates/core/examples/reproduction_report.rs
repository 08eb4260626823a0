//! The full reproduction report: coverage tables for K = {3,4} and {3,5}
//! plus the supporting checks. Pass `--quick` for the geometric bases only.

use pbd3::recipes::Builder;
use pbd3::report::{reproduction_report, ReportOptions};

fn main() -> pbd3::Result<()> {
    let quick = std::env::args().any(|a| a == "--quick");
    let report = reproduction_report(&Builder::new(), ReportOptions { quick, ..ReportOptions::default() })?;
    print!("{}", report.summary());
    println!("\noverall: {}", if report.passed() { "pass" } else { "FAIL" });
    Ok(())
}
