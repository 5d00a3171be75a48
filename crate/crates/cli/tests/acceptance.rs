//! Acceptance run: the full verification suite, one summary line per
//! criterion followed by its checks. Exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;

use spincmv_cli::verify::run_all;

fn main() -> ExitCode {
    let root = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    let reports = match run_all(&root) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verification suite could not run: {}", e.to_json());
            return ExitCode::FAILURE;
        }
    };
    println!("\nacceptance criteria");
    for r in &reports {
        println!("{}", r.line());
    }
    println!();
    for r in &reports {
        println!("{}", r.table());
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("\nacceptance result: {} passed; {failed} failed", reports.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
