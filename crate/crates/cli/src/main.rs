//! Batch front end for the discussion-corpus analyses and the SIEBC model.
//!
//! Subcommands: `ingest`, `analyze`, `fit`, `simulate`, `reconstruct`.
//! All randomness flows from the single configured seed; reruns with the
//! same config and seed produce byte-identical output trees. The `THREADS`
//! environment variable caps parallelism without affecting results.

mod commands;
mod config;
mod report;

use std::process::ExitCode;

use config::RunConfig;

/// Exit codes: 1 usage/config, 2 data, 3 escalated convergence warning.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Convergence(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Convergence(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Convergence(m) => m,
        }
    }
}

impl From<siebc_core::CoreError> for CliError {
    fn from(e: siebc_core::CoreError) -> Self {
        use siebc_core::CoreError::*;
        match e {
            InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

const USAGE: &str = "usage: siebc <ingest|analyze|fit|simulate|reconstruct> \
[--config PATH] [--seed N] [--out DIR] [--topic NAME]... [--strict]";

fn parse_args(mut args: std::env::Args) -> Result<(String, RunConfig), CliError> {
    let _ = args.next();
    let command = args.next().ok_or_else(|| CliError::usage(USAGE))?;
    let rest: Vec<String> = args.collect();

    // --config is applied first so explicit flags override the file.
    let mut config_path = None;
    let mut i = 0;
    while i < rest.len() {
        if rest[i] == "--config" {
            config_path =
                Some(rest.get(i + 1).ok_or_else(|| CliError::usage("--config needs a path"))?);
            i += 2;
        } else {
            i += 1;
        }
    }
    let mut config = match config_path {
        Some(p) => RunConfig::load(std::path::Path::new(p))?,
        None => RunConfig::default(),
    };

    let mut topics: Vec<String> = Vec::new();
    let mut i = 0;
    while i < rest.len() {
        match rest[i].as_str() {
            "--config" => i += 2,
            "--seed" => {
                let v = rest.get(i + 1).ok_or_else(|| CliError::usage("--seed needs a value"))?;
                config
                    .set("seed", v)
                    .map_err(CliError::Usage)?;
                i += 2;
            }
            "--out" => {
                let v = rest.get(i + 1).ok_or_else(|| CliError::usage("--out needs a value"))?;
                config.set("out", v).map_err(CliError::Usage)?;
                i += 2;
            }
            "--topic" => {
                let v = rest.get(i + 1).ok_or_else(|| CliError::usage("--topic needs a value"))?;
                topics.push(v.clone());
                i += 2;
            }
            "--strict" => {
                config.strict = true;
                i += 1;
            }
            other => {
                return Err(CliError::usage(format!("unknown argument `{other}`\n{USAGE}")));
            }
        }
    }
    if !topics.is_empty() {
        config.set("topics", &topics.join(",")).map_err(CliError::Usage)?;
    }
    Ok((command, config))
}

fn run() -> Result<(), CliError> {
    let (command, config) = parse_args(std::env::args())?;

    if let Ok(threads) = std::env::var("THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| CliError::usage(format!("THREADS must be an integer, got `{threads}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }

    std::fs::create_dir_all(&config.out)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", config.out.display())))?;

    match command.as_str() {
        "ingest" => commands::ingest::run(&config),
        "analyze" => commands::analyze::run(&config),
        "fit" => commands::fit::run(&config),
        "simulate" => commands::simulate::run(&config),
        "reconstruct" => commands::reconstruct::run(&config),
        other => Err(CliError::usage(format!("unknown command `{other}`\n{USAGE}"))),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
