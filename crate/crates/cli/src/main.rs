//! `partsep`: command-line access to the partial-separability toolkit.
//!
//! Every command writes one document to standard output (or `--out`):
//! `{"manifest": {...}, "result": {...}}` in JSON, or a table preceded by a
//! `# manifest:` comment line in CSV. Diagnostics go to standard error.
//! Exit status is 0 on success, 1 for computational or capacity failures
//! and 2 for usage or validation errors.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use partsep::SignVariant;
use serde::Serialize;

use error::CliError;
use output::{emit, Format, Manifest};

#[derive(Debug, Parser)]
#[command(
    name = "partsep",
    version,
    about = "Alternating Bell-type inequalities for partial separability"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the alternating coefficient tensor.
    Gen(GenArgs),
    /// Exact hybrid bound m_σ per bipartition.
    Bound(BoundArgs),
    /// Solutions of the μ-sequence conditions.
    Mu(MuArgs),
    /// Exhaustive minimax over sign tensors (n ≤ 4).
    Minimax(MinimaxArgs),
    /// Inequality value on a GHZ state.
    Violate(ViolateArgs),
    /// Sample measurement counts from a hybrid model or a GHZ state.
    Simulate(SimulateArgs),
    /// Test counts against the partial-separability bound.
    Certify(CertifyArgs),
}

fn parse_variant(s: &str) -> Result<SignVariant, String> {
    s.parse().map_err(|e: partsep::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GhzSign {
    Plus,
    Minus,
}

impl GhzSign {
    pub fn sign(self) -> i8 {
        match self {
            GhzSign::Plus => 1,
            GhzSign::Minus => -1,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value = "plus", value_parser = parse_variant)]
    pub variant: SignVariant,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    /// Particle count (taken from the tensor file when one is given).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub n: Option<u64>,
    #[arg(long, value_parser = parse_variant, conflicts_with = "tensor")]
    pub variant: Option<SignVariant>,
    /// Coefficient document, or a `gen` output document.
    #[arg(long)]
    pub tensor: Option<PathBuf>,
    /// `all`, `last` (= {1..n-1}|{n}), or one cluster as `1,2`.
    #[arg(long, default_value = "all")]
    pub partition: String,
}

#[derive(Debug, Args, Serialize)]
pub struct MuArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub n: u64,
    /// Cluster size.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub p: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct MinimaxArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub n: u64,
    /// Restrict to one bipartition, given as one cluster such as `1,2`.
    #[arg(long)]
    pub partition: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct ViolateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value = "plus", value_parser = parse_variant)]
    pub variant: SignVariant,
    #[arg(long, value_enum, default_value = "plus")]
    pub ghz_sign: GhzSign,
    /// `optimal`, `optimize`, or an angles document.
    #[arg(long, default_value = "optimal")]
    pub angles: String,
    /// Angles in the input document are in degrees.
    #[arg(long)]
    pub degrees: bool,
    /// Random starts for `--angles optimize`.
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Hybrid-model document.
    #[arg(long, conflicts_with = "ghz", required_unless_present = "ghz")]
    pub model: Option<PathBuf>,
    /// Sample a GHZ state instead of a model.
    #[arg(long)]
    pub ghz: bool,
    #[arg(long, required_if_eq("ghz", "true"), value_parser = clap::value_parser!(u64).range(2..=16))]
    pub n: Option<u64>,
    /// Inequality whose optimal angles are used for `--ghz`.
    #[arg(long, default_value = "plus", value_parser = parse_variant)]
    pub variant: SignVariant,
    #[arg(long, value_enum, default_value = "plus")]
    pub ghz_sign: GhzSign,
    /// Angles document for `--ghz` (default: optimal angles).
    #[arg(long, requires = "ghz")]
    pub angles: Option<PathBuf>,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    /// Counts document, or a `simulate` output document.
    pub input: PathBuf,
    /// Required excess over the bound, in standard errors.
    #[arg(long, default_value_t = partsep::certify::DEFAULT_THRESHOLD_SIGMA)]
    pub threshold: f64,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (name, params, report) = match &cli.command {
        Command::Gen(a) => ("gen", serde_json::to_value(a), commands::gen(a)?),
        Command::Bound(a) => ("bound", serde_json::to_value(a), commands::bound(a)?),
        Command::Mu(a) => ("mu", serde_json::to_value(a), commands::mu(a)?),
        Command::Minimax(a) => ("minimax", serde_json::to_value(a), commands::minimax(a)?),
        Command::Violate(a) => ("violate", serde_json::to_value(a), commands::violate(a)?),
        Command::Simulate(a) => ("simulate", serde_json::to_value(a), commands::simulate(a)?),
        Command::Certify(a) => ("certify", serde_json::to_value(a), commands::certify(a)?),
    };
    let params = params.map_err(partsep::Error::from)?;
    let manifest = Manifest::new(name, params, report.seeds.clone());
    if let Some(s) = &report.summary {
        eprintln!("{s}");
    }
    emit(&manifest, &report, cli.format, cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
