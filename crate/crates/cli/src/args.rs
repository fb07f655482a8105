use crate::error::{CliError, CliResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use orbit_transfer::NonlinearForm;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "orbit-transfer", version, about = "Orbit-reduced Fourier-Galerkin diagnostics")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output file (or directory for `transfer`). Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// TOML file supplying defaults; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact lattice, orbit, shell and triad counts for N = 1..=N_max.
    Diagnostics(DiagnosticsArgs),
    /// Orbit-triad incidence counts for one truncation.
    Incidence(IncidenceArgs),
    /// Transfer matrix, its antisymmetric/symmetric parts and row sums.
    Transfer(TransferArgs),
    /// RK4 run with the orbit-level enstrophy balance checked at each record.
    Simulate(SimulateArgs),
    /// Sigma ratios, row-sum ratios and incidence growth sweep.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
pub struct DiagnosticsArgs {
    #[arg(long)]
    pub n_max: Option<u32>,
}

#[derive(Debug, Args)]
pub struct IncidenceArgs {
    #[arg(long)]
    pub n: Option<u32>,
    /// Single target orbit as a canonical triple `a,b,c`.
    #[arg(long)]
    pub alpha: Option<String>,
}

/// Where the velocity state comes from: a JSON file or a seeded draw.
#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Sobolev exponent.
    #[arg(long)]
    pub s: Option<f64>,
    /// H^s norm of a generated state.
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub form: Option<String>,
    /// Also write the generated state as JSON.
    #[arg(long)]
    pub save_state: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Skip the row-sum report (and its 3/2 < s < 3 requirement).
    #[arg(long)]
    pub no_rowsums: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Record diagnostics every this many steps.
    #[arg(long)]
    pub every: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Comma-separated Sobolev exponents.
    #[arg(long)]
    pub s_list: Option<String>,
    /// Comma-separated seeds for the row-sum sweep.
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long)]
    pub m: Option<f64>,
    /// Largest N of the row-sum sweep.
    #[arg(long)]
    pub rowsum_n_max: Option<u32>,
    /// Largest N of the incidence scan.
    #[arg(long)]
    pub incidence_n_max: Option<u32>,
    #[arg(long)]
    pub form: Option<String>,
}

/// Every key a config file may set. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub n: Option<u32>,
    pub n_max: Option<u32>,
    pub alpha: Option<String>,
    pub state: Option<PathBuf>,
    pub save_state: Option<PathBuf>,
    pub s: Option<f64>,
    pub m: Option<f64>,
    pub nu: Option<f64>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub every: Option<usize>,
    pub form: Option<String>,
    pub s_list: Option<Vec<f64>>,
    pub seeds: Option<Vec<u64>>,
    pub rowsum_n_max: Option<u32>,
    pub incidence_n_max: Option<u32>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))
    }
}

pub fn parse_form(flag: Option<&str>, file: Option<&str>) -> CliResult<NonlinearForm> {
    match flag.or(file) {
        None => Ok(NonlinearForm::default()),
        Some(s) => s.parse().map_err(|_| {
            CliError::usage(format!("unknown form `{s}`; expected `gradient` or `convective`"))
        }),
    }
}

pub fn parse_list<T: std::str::FromStr>(name: &str, text: &str) -> CliResult<Vec<T>> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(CliError::usage(format!("--{name} must be a nonempty comma-separated list")));
    }
    items
        .iter()
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::usage(format!("--{name}: cannot parse `{s}`")))
        })
        .collect()
}
