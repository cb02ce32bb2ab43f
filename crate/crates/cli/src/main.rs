mod args;
mod commands;

use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::Cli;
use commands::UsageError;

/// Merges a configuration file under the command line: explicit flags and
/// the subcommand given on the command line win.
fn resolve(mut cli: Cli) -> Result<Cli> {
    if let Some(path) = cli.config.take() {
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let file: Cli = toml::from_str(&text)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        cli.threads = cli.threads.or(file.threads);
        cli.command = cli.command.or(file.command);
    }
    Ok(cli)
}

fn run(cli: Cli) -> Result<()> {
    let dump = cli.dump_config;
    let cli = resolve(cli)?;
    if dump {
        print!("{}", toml::to_string(&cli)?);
        return Ok(());
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let command = cli
        .command
        .ok_or_else(|| UsageError("no subcommand given (see --help)".into()))?;
    commands::run(&command)
}

/// The error chain on one line, skipping causes already quoted by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
