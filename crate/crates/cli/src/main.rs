use std::process::ExitCode;

use clap::Parser;

use mmqkd_cli::{emit, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli).and_then(|outcome| emit(&outcome).map(|()| outcome.success)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
