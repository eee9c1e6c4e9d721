//! Command-line front end for the `qconc` library.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod input;
pub mod reproduce;

use std::fs;

use args::{Cli, Command, Format, OutputArgs};
use commands::Output;
use error::{CliError, CliResult};

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format::json(self.json.clone()),
            Format::Table | Format::Csv => {
                let csv = format == Format::Csv;
                let mut s = format::tables(&self.tables, csv);
                for note in &self.notes {
                    if csv {
                        s.push_str("# ");
                    } else {
                        s.push('\n');
                    }
                    s.push_str(note);
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn output_args(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Bound(a) => &a.output,
        Command::Witness(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::Reproduce(a) => &a.output,
        Command::Threshold(a) => &a.output,
    }
}

pub fn execute(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Bound(a) => commands::bound(a),
        Command::Witness(a) => commands::witness(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Reproduce(a) => reproduce::run(a),
        Command::Threshold(a) => commands::threshold(a),
    }
}

/// Run `cli`, write its output, and return the process exit status.
pub fn run(cli: &Cli) -> CliResult<i32> {
    let output = execute(cli)?;
    let opts = output_args(cli);
    let text = output.render(opts.format);
    match &opts.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::File {
            path: path.display().to_string(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(output.status)
}
