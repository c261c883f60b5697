mod args;
mod commands;
mod error;
mod output;

use std::fs;
use std::io;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Format, RunConfig};
use crate::error::{CliError, CliResult};

const DEFAULT_TOL: f64 = 1e-12;
const DEFAULT_TERM_CAP: usize = 10_000;
const TERM_CAP_VAR: &str = "FPI_MAX_TERMS";

fn env_term_cap() -> CliResult<Option<usize>> {
    match std::env::var(TERM_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::usage(format!("{TERM_CAP_VAR}={v} is not a positive integer"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::usage(format!("{TERM_CAP_VAR}: {e}"))),
    }
}

fn read_replay(path: &Path) -> CliResult<RunConfig> {
    let bad = |reason: String| CliError::Replay {
        path: path.to_path_buf(),
        reason,
    };
    let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let mut doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let config = doc
        .get_mut("config")
        .map(serde_json::Value::take)
        .ok_or_else(|| bad("no `config` object".into()))?;
    serde_json::from_value(config).map_err(|e| bad(e.to_string()))
}

fn resolve(cli: Cli) -> CliResult<RunConfig> {
    if let Some(path) = &cli.replay {
        if cli.command.is_some() || cli.tol.is_some() || cli.k_max.is_some() {
            return Err(CliError::usage("--replay takes only --out and --format alongside it"));
        }
        let mut config = read_replay(path)?;
        if let Some(f) = cli.format {
            config.format = f;
        }
        return Ok(config);
    }
    let command = cli
        .command
        .ok_or_else(|| CliError::usage("a subcommand or --replay is required (see --help)"))?;
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::usage(format!("--tol must lie in (0, 1), got {tol}")));
    }
    let cap = env_term_cap()?.unwrap_or(DEFAULT_TERM_CAP);
    let k_max = cli.k_max.unwrap_or(cap);
    if k_max == 0 {
        return Err(CliError::usage("--k-max must be positive"));
    }
    Ok(RunConfig {
        command,
        tol,
        k_max,
        max_terms: cap,
        format: cli.format.unwrap_or(Format::Table),
    })
}

fn emit(bytes: &[u8], out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => output::write_to(&mut io::stdout().lock(), bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn main_inner(cli: Cli) -> CliResult<u8> {
    let out = cli.out.clone();
    let config = resolve(cli)?;
    let report = commands::run(&config)?;
    emit(&output::render(&report, &config)?, out.as_deref())?;
    Ok(if report.nonconverged { 3 } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // Collapse clap's first paragraph onto one line.
            let msg = e.to_string();
            let head: Vec<&str> = msg.lines().map(str::trim).take_while(|l| !l.is_empty()).collect();
            eprintln!("{}", head.join(" "));
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    match main_inner(cli) {
        Ok(code) => {
            if code == 3 {
                eprintln!("warning: some values did not converge (see the `converged` column)");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
