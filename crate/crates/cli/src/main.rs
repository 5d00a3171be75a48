use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spincmv_cli::args::{resolve, Cli};
use spincmv_cli::error::CliError;
use spincmv_cli::run::run;
use spincmv_cli::verify::run_all;

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SPINCMV_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .map_err(|_| CliError::Config(format!("SPINCMV_THREADS={value:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn execute(cli: &Cli) -> Result<ExitCode, CliError> {
    init_threads()?;
    match resolve(cli)? {
        Some(config) => {
            let out = run(&config)?;
            for path in &out.files {
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            let root = cli.out.clone().unwrap_or_else(|| PathBuf::from("verify"));
            let reports = run_all(&root)?;
            for r in &reports {
                println!("{}", r.table());
            }
            let ok = reports.iter().all(|r| r.passed());
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            eprintln!("{}", CliError::Usage(e.to_string()).to_json());
            return ExitCode::from(2);
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
