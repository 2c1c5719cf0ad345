//! `paraflux`: norms, product decompositions and audits from the command line.
//!
//! Exit codes: 0 success, 1 a hard check failed, 2 invalid configuration
//! or unmet hypotheses, 3 I/O or malformed input files.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paraflux::audit::Lemma;
use paraflux::{Error, Exponent};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "paraflux", version, about = "Littlewood-Paley norms, paraproducts and inequality audits on the torus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Besov and Triebel-Lizorkin norms of one field.
    Norm(NormArgs),
    /// Paraproduct decomposition of a product of fields.
    Decompose(DecomposeArgs),
    /// The lemma suite on the frozen test bank.
    Lemmas(LemmasArgs),
    /// Embedding and multiplication audits from a manifest.
    Audit(AuditArgs),
    /// Writes generator specs out as FLD1 files.
    Gen(GenArgs),
}

/// Where input fields come from. Exactly one kind of source is used.
#[derive(Debug, Args, Serialize)]
pub struct Source {
    /// FLD1 input file.
    #[arg(long = "in", value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
    /// JSON generator spec, or an array of them.
    #[arg(long = "gen", value_name = "FILE")]
    pub generator: Option<PathBuf>,
    /// Pure wave with this wavevector, e.g. `4` or `1,-2`.
    #[arg(long, value_name = "K", allow_hyphen_values = true)]
    pub wave: Vec<String>,
    /// Points per axis for `--wave`.
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// Dimension for `--wave`.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
pub enum SpaceArg {
    #[value(name = "B")]
    B,
    #[value(name = "F")]
    F,
}

#[derive(Debug, Args, Serialize)]
pub struct NormArgs {
    #[command(flatten)]
    pub source: Source,
    /// Space family; repeat for both. Defaults to B and F.
    #[arg(long, value_enum, ignore_case = true)]
    pub space: Vec<SpaceArg>,
    #[arg(long, allow_hyphen_values = true, required = true)]
    pub s: Vec<f64>,
    #[arg(long, required = true)]
    pub p: Vec<Exponent>,
    #[arg(long, required = true)]
    pub q: Vec<Exponent>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub source: Source,
    /// Number of factors; a single input is repeated this many times.
    #[arg(long)]
    pub m: Option<usize>,
    /// Gap parameter N; defaults to the smallest admissible value.
    #[arg(long)]
    pub gap: Option<usize>,
    /// Also write every band term.
    #[arg(long)]
    pub dump_bands: bool,
    #[arg(long, default_value = "decomposition")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct LemmasArgs {
    /// Run only these lemmas (comma separated or repeated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<Lemma>,
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    #[arg(long, default_value_t = 64)]
    pub planar_size: usize,
    #[arg(long, default_value_t = 10_000)]
    pub hardy_samples: usize,
    #[arg(long, default_value_t = 64)]
    pub hardy_max_len: usize,
    #[arg(long, default_value_t = 0x5EED)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct AuditArgs {
    /// JSON audit manifest; the built-in catalog when absent.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Grid sizes, coarse to fine.
    #[arg(long, value_delimiter = ',')]
    pub resolutions: Option<Vec<usize>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
pub enum DomainArg {
    Physical,
    Spectral,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    /// JSON generator spec, or an array of them.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = DomainArg::Physical)]
    pub domain: DomainArg,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// A hard check did not hold.
    Check(String),
    Core(Error),
    Config(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
            Failure::Core(Error::Io(_) | Error::Format(_) | Error::Csv(_)) => 3,
            Failure::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Check(m) => write!(f, "check failed: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Config(m) => write!(f, "invalid configuration: {m}"),
            Failure::Io(m) => f.write_str(m),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("PARAFLUX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Config(format!("PARAFLUX_THREADS={raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
