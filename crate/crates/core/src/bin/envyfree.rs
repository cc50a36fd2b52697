use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use envyfree::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    let outcome = cli::run(&args);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
