//! `privtree`: induce a decision tree from a CSV table, perturb the table
//! under the tree's guidance, and compare classification accuracy before
//! and after.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use privtree_core::{CaptTarget, Error, LwpaScope, NoiseMode, WrapMode};

#[derive(Parser)]
#[command(
    name = "privtree",
    version,
    about = "Tree-guided noise addition for tabular data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Induce a decision tree and print it.
    Tree(RunArgs),
    /// Perturb the dataset and emit the result as CSV.
    Perturb(RunArgs),
    /// Split, perturb the training side, retrain and compare accuracy.
    Eval(RunArgs),
    /// Run the built-in liver walkthrough with self-checks.
    Demo,
}

#[derive(Args)]
pub struct RunArgs {
    /// TOML run configuration; the flags below override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Perturbation seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file: tree JSON, perturbed CSV or eval table, per command.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Where to write the JSON report.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Stdout format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Fixed shift that bypasses the noise draw for one attribute; repeatable.
    #[arg(long = "inject-shift", value_name = "ATTR=REAL")]
    pub inject_shift: Vec<String>,
    /// Retention probability for the categorical shuffle.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "noise-mode", value_enum)]
    pub noise_mode: Option<NoiseModeArg>,
    /// Noise scale for attributes on the record's path.
    #[arg(long = "scale-lrpa", value_name = "REAL")]
    pub scale_lrpa: Option<f64>,
    /// Noise scale for attributes off the record's path.
    #[arg(long = "scale-lwpa", value_name = "REAL")]
    pub scale_lwpa: Option<f64>,
    #[arg(long, value_enum)]
    pub wrap: Option<WrapArg>,
    /// Which attributes count as off-path: tree-tested only, or all features.
    #[arg(long = "lwpa-scope", value_enum)]
    pub lwpa_scope: Option<LwpaScopeArg>,
    /// Which columns the categorical shuffle rewrites.
    #[arg(long = "capt-target", value_enum)]
    pub capt_target: Option<CaptTargetArg>,
    /// Skip the categorical shuffle stage entirely.
    #[arg(long = "no-capt")]
    pub no_capt: bool,
    /// Held-out fraction for eval.
    #[arg(long = "test-fraction", value_name = "REAL")]
    pub test_fraction: Option<f64>,
    /// Seed for the train/test split; defaults to the perturbation seed.
    #[arg(long = "split-seed")]
    pub split_seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum NoiseModeArg {
    PerRecord,
    PerAttribute,
}

impl From<NoiseModeArg> for NoiseMode {
    fn from(v: NoiseModeArg) -> Self {
        match v {
            NoiseModeArg::PerRecord => NoiseMode::PerRecord,
            NoiseModeArg::PerAttribute => NoiseMode::PerAttributeConstant,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum WrapArg {
    Modular,
    PaperLiteral,
}

impl From<WrapArg> for WrapMode {
    fn from(v: WrapArg) -> Self {
        match v {
            WrapArg::Modular => WrapMode::Modular,
            WrapArg::PaperLiteral => WrapMode::PaperLiteral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum LwpaScopeArg {
    Tree,
    All,
}

impl From<LwpaScopeArg> for LwpaScope {
    fn from(v: LwpaScopeArg) -> Self {
        match v {
            LwpaScopeArg::Tree => LwpaScope::TreeTested,
            LwpaScopeArg::All => LwpaScope::AllFeatures,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CaptTargetArg {
    Class,
    AllCategorical,
}

impl From<CaptTargetArg> for CaptTarget {
    fn from(v: CaptTargetArg) -> Self {
        match v {
            CaptTargetArg::Class => CaptTarget::ClassColumn,
            CaptTargetArg::AllCategorical => CaptTarget::AllCategorical,
        }
    }
}

/// A command failure, classified for the exit code: 2 for configuration
/// problems, 3 for data problems, 4 for a failed internal check.
pub enum Failure {
    Config(String),
    Data(String),
    Check(String),
}

impl Failure {
    pub fn config(e: Error) -> Self {
        Failure::Config(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Data(_) => 3,
            Failure::Check(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Data(m) | Failure::Check(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Io { .. }
            | Error::HeaderMismatch { .. }
            | Error::EmptyBody
            | Error::RaggedRow { .. }
            | Error::ParseNumeric { .. }
            | Error::MissingValue { .. } => Failure::Data(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tree(args) => commands::tree(&args),
        Command::Perturb(args) => commands::perturb(&args),
        Command::Eval(args) => commands::eval(&args),
        Command::Demo => commands::demo(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
