//! Command implementations behind the `mmqkd` binary.
//!
//! Every command is a pure function of its arguments, input files and seed,
//! and returns its rendered output so that callers (the binary, tests) decide
//! where it goes.

pub mod commands;
pub mod output;
pub mod sweep;

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "mmqkd", version, about = "Mismatched-basis BB84 simulator")]
pub struct Cli {
    /// Seed for every random draw; overrides seeds in input files.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one protocol session from a JSON config.
    Run { config: PathBuf },
    /// Analytic error rates and key-rate bounds for a channel.
    Bounds {
        /// Channel JSON, inline or as a file path.
        channel: String,
    },
    /// Run a parameter sweep described by a JSON spec.
    Sweep { spec: PathBuf },
    /// Check the CSS averaging identities on random nested codes.
    CssVerify {
        /// Block length, at most 6.
        #[arg(long)]
        n: usize,
        /// Dimension of the outer code C1.
        #[arg(long)]
        dim_c1: usize,
        /// Dimension of the inner code C2, at most dim C1.
        #[arg(long)]
        dim_c2: usize,
        /// Number of random code pairs to check.
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Randomized property checks of the analytic and decoding layers.
    Selftest,
}

/// Rendered result of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    /// False when a check reported a violation.
    pub success: bool,
    /// Where the text goes; `None` means stdout.
    pub destination: Option<PathBuf>,
}

pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let mut destination = cli.out.clone();
    let (text, success) = match &cli.command {
        Command::Run { config } => {
            let cfg: commands::RunConfig = load_json(config)?;
            let result = commands::run(&cfg, cli.seed)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => output::to_json(&result)?,
                Format::Csv => commands::run_table(&result, cli.seed.unwrap_or(cfg.session.seed))
                    .to_csv()?,
            };
            (text, true)
        }
        Command::Bounds { channel } => {
            let text = if channel.trim_start().starts_with('{') {
                channel.clone()
            } else {
                read(Path::new(channel))?
            };
            let spec = parse_json(&text, "channel")?;
            let table = commands::bounds_table(&commands::bounds(&spec)?);
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv()?,
                Format::Json => table.to_json_object()?,
            };
            (text, true)
        }
        Command::Sweep { spec } => {
            let spec: sweep::SweepSpec = load_json(spec)?;
            if destination.is_none() {
                destination = spec.output.clone();
            }
            let table = sweep::run(&spec, cli.seed)?;
            let text = match cli.format.or(spec.format).unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv()?,
                Format::Json => table.to_json()?,
            };
            (text, true)
        }
        Command::CssVerify {
            n,
            dim_c1,
            dim_c2,
            trials,
        } => {
            let report = commands::css_verify(*n, *dim_c1, *dim_c2, *trials, cli.seed.unwrap_or(0))?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => output::to_json(&report)?,
                Format::Csv => report.table().to_csv()?,
            };
            (text, report.passed)
        }
        Command::Selftest => {
            let report = commands::selftest(cli.seed.unwrap_or(0));
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => output::to_json(&report)?,
                Format::Csv => report.table().to_csv()?,
            };
            (text, report.passed)
        }
    };
    Ok(Outcome {
        text,
        success,
        destination,
    })
}

/// Writes the outcome to its destination.
pub fn emit(outcome: &Outcome) -> anyhow::Result<()> {
    match &outcome.destination {
        Some(path) => std::fs::write(path, &outcome.text)
            .with_context(|| format!("cannot write output file {}", path.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    parse_json(&read(path)?, &path.display().to_string())
}

/// Parses JSON, naming the offending field on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, source: &str) -> anyhow::Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            anyhow!("{source}: {}", e.inner())
        } else {
            anyhow!("{source}: field `{path}`: {}", e.inner())
        }
    })
}
