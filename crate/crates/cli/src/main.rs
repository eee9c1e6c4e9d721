use std::process::ExitCode;

use clap::Parser;

use qconc_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match qconc_cli::run(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
