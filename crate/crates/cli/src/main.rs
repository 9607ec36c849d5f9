//! `hvir`: exact computations with weight modules over `Vir[G]`.
//!
//! Exit codes: 0 success (including Unknown verdicts), 1 property failure,
//! 2 usage or configuration error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "hvir", version, about = "Weight modules over higher-rank Virasoro algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi, antisymmetry, central-term and module-axiom suites.
    AlgebraCheck(Common),
    /// Weight/dimension tables of a module.
    Build(Common),
    /// Classification verdict for a module window.
    Classify(Common),
    /// Run the probes listed in the configuration.
    Probe(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Directory for report and table files (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's `format` (default json).
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long = "box")]
    box_radius: Option<i64>,
    /// Verma window parts, e.g. "1,0;0,1;1,-1".
    #[arg(long)]
    window_parts: Option<String>,
}

pub enum Failure {
    Config(String),
    Property(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::AlgebraCheck(c) => commands::run("algebra-check", c),
        Command::Build(c) => commands::run("build", c),
        Command::Classify(c) => commands::run("classify", c),
        Command::Probe(c) => commands::run("probe", c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("property failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
    }
}
