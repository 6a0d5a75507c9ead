mod bench;
mod cli;
mod commands;
mod error;
mod json;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::{CliError, Status, USAGE_EXIT};

fn run(cli: &Cli) -> Result<Status, CliError> {
    // reject a malformed budget even when no enumeration runs
    commands::budget()?;
    let (text, status) = match &cli.command {
        Command::EvalGl(args) => json_output(commands::eval_gl(args)?),
        Command::EvalSl(args) => json_output(commands::eval_sl(args)?),
        Command::CountTrace(args) => json_output(commands::count_trace(args)?),
        Command::Verify(args) => json_output(commands::verify(args)?),
        Command::Bench(args) => (bench::run(args)?, Status::Ok),
    };
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(status)
}

fn json_output((value, status): (serde_json::Value, Status)) -> (String, Status) {
    (json::to_text(&value), status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => status.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}
