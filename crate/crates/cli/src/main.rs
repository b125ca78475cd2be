//! `logkernel` command line driver.
//!
//! Exit codes: 0 success, 2 some structure did not stabilize, 3 invalid or
//! unsupported input, 1 any other failure.

mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn run(cli: &Cli) -> logkernel::Result<commands::Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Field { d } => commands::field(g, *d),
        Command::Wk { d, i, r } => commands::wk(g, *d, *i, *r),
        Command::Scan { dmin, dmax, report, i, sample } => commands::scan(g, *dmin, *dmax, *report, *i, *sample),
        Command::Cubic { conductor, poly, index, i } => commands::cubic(g, *conductor, poly.as_deref(), *index, *i),
        Command::Lambda { file, levels, shift, kappa, twist_min, twist_max } => {
            commands::lambda(g, file, *levels, *shift, *kappa, (*twist_min, *twist_max))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
            if outcome.stabilized {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(output::exit_code(&e) as u8)
        }
    }
}
