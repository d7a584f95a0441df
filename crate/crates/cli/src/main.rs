//! Command-line harness for the `schrodinger_lab` experiments.
//!
//! Exit status: 0 when every assertion passes, 1 when one fails, 2 on a
//! usage or configuration error.

mod args;
mod commands;
mod error;
mod output;
mod selftest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use output::Summary;

const THREADS_VAR: &str = "SCHRODINGER_LAB_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Config(format!(
            "{THREADS_VAR} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn dispatch(command: &Command) -> Result<Summary, CliError> {
    match command {
        Command::Blowup(a) => commands::blowup(a),
        Command::Filter(a) => commands::filter(a),
        Command::Viscous(a) => commands::viscous(a),
        Command::Gaps(a) => commands::gaps(a),
        Command::Pairbound(a) => commands::pairbound(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Selftest(a) => selftest::selftest(a),
    }
}

fn out_dir(command: &Command) -> &std::path::Path {
    match command {
        Command::Blowup(a) => &a.out.out,
        Command::Filter(a) => &a.out.out,
        Command::Viscous(a) => &a.out.out,
        Command::Gaps(a) => &a.out.out,
        Command::Pairbound(a) => &a.out.out,
        Command::Simulate(a) => &a.out.out,
        Command::Selftest(a) => &a.out.out,
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let summary = dispatch(&cli.command)?;
    let path = summary.write(out_dir(&cli.command))?;
    for c in summary.check_list() {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}: {}", c.name, c.detail);
    }
    println!("summary written to {}", path.display());
    Ok(summary.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}: one or more assertions failed", cli.command.name());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
