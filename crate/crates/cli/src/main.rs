//! Command-line driver for the matching and max-sat engines, the adversary
//! games and the exhaustive ratio tables.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use parwidth::harness::OutputFormat;
use parwidth::matching::TieRule;

#[derive(Parser, Debug)]
#[command(
    name = "parwidth",
    version,
    about = "Width-bounded online algorithms, adversary games and exact ratio tables"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Largest n enumerated without --long-run.
    #[arg(long, global = true, default_value_t = 5)]
    pub limit_n: usize,
    #[arg(long, global = true)]
    pub long_run: bool,
    #[arg(long, global = true, value_enum, default_value_t = Tie::Low)]
    pub tie_rule: Tie,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
            Format::Table => OutputFormat::Table,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tie {
    Low,
    High,
}

impl From<Tie> for TieRule {
    fn from(t: Tie) -> Self {
        match t {
            Tie::Low => TieRule::Low,
            Tie::High => TieRule::High,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run one algorithm on one instance and one arrival order.
    Run(RunArgs),
    /// Exhaustive worst-case random-order ratios for the deterministic rules.
    RomTable(RomTableArgs),
    /// Exact random-order ratio of one algorithm on one instance.
    RomEval(InstanceAlgorithm),
    /// Seeded Monte-Carlo estimate with a 95% interval.
    Mc(McArgs),
    /// Play an adversary against a built-in or scripted algorithm.
    Game(GameArgs),
    /// LP derandomization of Ranking along an arrival order.
    LpRanking(OrderedInstance),
    /// Derandomized max-sat with per-step verification.
    MaxsatDerand(DerandArgs),
    /// Relabelling evaluators on the three-by-three trap graph.
    PriorityDemo,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// rand-hard, upper-triangular, complete, prio-one-rand, random-bipartite,
    /// width2, random-cnf
    pub kind: String,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Offline side for complete and random bipartite graphs (defaults to n).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value = "1/2")]
    pub prob: String,
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, default_value = "3/4")]
    pub w: String,
    #[arg(long, default_value_t = 10)]
    pub clauses: usize,
    #[arg(long, default_value_t = 3)]
    pub max_len: usize,
    /// Record layout instead of the 0/1 matrix.
    #[arg(long)]
    pub records: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InstanceAlgorithm {
    #[arg(long, short)]
    pub algorithm: String,
    #[arg(long, short)]
    pub instance: PathBuf,
}

#[derive(Args, Debug)]
pub struct OrderedInstance {
    #[arg(long, short)]
    pub instance: PathBuf,
    /// Comma-separated arrival order; identity when omitted.
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub target: InstanceAlgorithm,
    #[arg(long)]
    pub order: Option<String>,
    /// Parameter of width2-johnson.
    #[arg(long, default_value = "3/2")]
    pub p: String,
}

#[derive(Args, Debug)]
pub struct RomTableArgs {
    /// Sizes to tabulate.
    #[arg(long, value_delimiter = ',', default_values_t = vec![3usize, 4, 5])]
    pub n: Vec<usize>,
    /// Rule names; defaults to the four table rules.
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Vec<String>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Stop launching shards after this many seconds.
    #[arg(long)]
    pub time_budget: Option<u64>,
    #[arg(long)]
    pub include_zero_opt: bool,
    /// Also run the raw 2^(n^2) enumeration (n <= 4) and compare.
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Args, Debug)]
pub struct McArgs {
    #[command(flatten)]
    pub target: InstanceAlgorithm,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Fix the arrival order instead of drawing it uniformly.
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Args, Debug)]
pub struct GameArgs {
    /// width, max-of-k, priority, maxsat-equivalence, maxsat-two-variable,
    /// maxsat-model0, maxsat-model3
    #[arg(long)]
    pub adversary: String,
    #[arg(long, short)]
    pub algorithm: String,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value = "1/10")]
    pub epsilon: String,
    #[arg(long, default_value_t = 1)]
    pub scale: usize,
    #[arg(long, default_value = "3/2")]
    pub p: String,
    /// Per-turn decisions for the matching games.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// Write the transcript as JSON lines.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DerandArgs {
    #[arg(long, short)]
    pub instance: PathBuf,
    /// modular (clause weights) or coverage (random weighted coverage).
    #[arg(long, default_value = "modular")]
    pub objective: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
