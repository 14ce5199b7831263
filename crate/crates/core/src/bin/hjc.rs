use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hjc_core::cli::{run, CliError, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &report.body),
        None => std::io::stdout().lock().write_all(report.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("numerical checks failed; see report");
        ExitCode::from(1)
    }
}
