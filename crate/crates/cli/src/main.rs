mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::Cli;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let report = match commands::run(&cli.global, &cli.command) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let config = json!({ "global": cli.global, "command": cli.command });
    let doc = output::document(cli.command.name(), config, report.passed, report.records);
    let text = output::render(cli.global.format, &doc);
    if std::io::stdout().write_all(text.as_bytes()).is_err() {
        return ExitCode::from(EXIT_USAGE);
    }
    match report.passed {
        Some(false) => ExitCode::from(EXIT_VERIFICATION),
        _ => ExitCode::SUCCESS,
    }
}
