//! Runs the oracle suite and prints failures, if any.

use blowup::verify::{run, VerifyOptions};

fn main() {
    let opts = VerifyOptions {
        asymptotics: true,
        ..VerifyOptions::default()
    };
    let report = run(&opts).expect("suite runs");
    let mut group = "";
    for c in &report.checks {
        if c.group != group {
            group = c.group;
            println!("[{group}]");
        }
        println!("  {} {:<72} {:.2e} <= {:.0e}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.measured, c.allowed);
    }
    println!("{} checks, {} failed", report.checks.len(), report.failures().count());
    std::process::exit(if report.passed() { 0 } else { 1 });
}
