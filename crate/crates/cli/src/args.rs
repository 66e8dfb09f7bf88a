use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "shmat",
    version,
    about = "Construct and analyze seminormalized Hadamard matrices"
)]
pub struct Cli {
    /// Write a JSON run manifest (flags, seed, duration, output digest).
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stream a vector family, one `+`/`-` vector per line.
    Enumerate(EnumerateArgs),
    /// Build one SH matrix (or all of them, for exhaustive search).
    Construct(ConstructArgs),
    /// Check a matrix file. Exit 0 Hadamard, 1 not, 2 parse error, 3 bad order.
    Verify(VerifyArgs),
    /// Build the orthogonality graph of the SH vectors.
    Graph(GraphArgs),
    /// Exact counts, probabilities and their estimates.
    Analyze(AnalyzeArgs),
    /// Time a construction method over orders and seeds.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub k: usize,
    /// sh, psh, hsh, osh, ohh or unity.
    #[arg(long, default_value = "sh")]
    pub family: String,
    /// Refuse to enumerate more vectors than this.
    #[arg(long, default_value_t = shmat::vectorspace::DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
    /// Print only the family size.
    #[arg(long)]
    pub count: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exhaustive,
    Rvs,
    Osa,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::Rvs => "rvs",
            Method::Osa => "osa",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Acceptance {
    Threshold,
    Metropolis,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draws, steps or candidates per attempt.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_iter: u64,
    /// Number of attempts.
    #[arg(long, default_value_t = 20)]
    pub restarts: u32,
    /// Annealing threshold schedule, `shape:start:end`.
    #[arg(long, default_value = "linear:0.5:1.0")]
    pub schedule: String,
    #[arg(long, value_enum, default_value_t = Acceptance::Threshold)]
    pub acceptance: Acceptance,
    /// Metropolis temperature at threshold 0.
    #[arg(long, default_value_t = 8.0)]
    pub temperature_scale: f64,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = Method::Rvs)]
    pub method: Method,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Write the per-stage draw counts of a random vector selection run.
    #[arg(long, value_name = "PATH")]
    pub trace_csv: Option<PathBuf>,
    /// Write the matrix here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Exhaustive search: write every matrix as `NNNNNN.txt` in this directory.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Matrix file, or `-` for stdin.
    pub path: PathBuf,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    #[arg(long)]
    pub k: usize,
    /// dot, json or edges.
    #[arg(long)]
    pub export: Option<String>,
    /// List every (4k−1)-clique as vertex indices.
    #[arg(long)]
    pub cliques: bool,
    /// Stop after this many cliques.
    #[arg(long, default_value_t = shmat::CliqueBudget::default().max_cliques)]
    pub max_cliques: u64,
    /// Write the export here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long, conflicts_with = "k_range")]
    pub k: Option<usize>,
    /// Inclusive range such as `1..8`.
    #[arg(long)]
    pub k_range: Option<String>,
    /// Write counts and probabilities as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Print the expected-versus-actual count table as CSV.
    #[arg(long)]
    pub discrepancy: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Method::Rvs)]
    pub method: Method,
    /// Inclusive order range with optional step, e.g. `12..24` or `12..24:4`.
    #[arg(long, default_value = "12..24")]
    pub orders: String,
    /// Runs per order, with seeds `seed .. seed + seeds`.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Leave the wall-time column empty so repeated runs compare equal.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

/// Parses `a..b` or `a..b:step`, inclusive.
pub fn parse_range(s: &str, default_step: usize) -> anyhow::Result<Vec<usize>> {
    let (range, step) = match s.split_once(':') {
        Some((r, st)) => (r, st.parse()?),
        None => (s, default_step),
    };
    let (a, b) = range
        .split_once("..")
        .ok_or_else(|| anyhow::anyhow!("expected a range like 1..8, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (usize, usize) = (a.parse()?, b.parse()?);
    anyhow::ensure!(a <= b && step > 0, "empty range `{s}`");
    Ok((a..=b).step_by(step).collect())
}
