//! `lcos`: query an oracle for pairwise causal consistency, search for the
//! maximally consistent causal orders and score them against a reference.

mod commands;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcos_core::metrics::CoeMode;

pub use commands::run;

/// Process exit status for a failed run.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    use lcos_core::Error;
    let Some(e) = err.chain().find_map(|c| c.downcast_ref::<Error>()) else {
        return 1;
    };
    match e {
        Error::Transport { .. } => 2,
        Error::IncompleteMatrix { .. }
        | Error::FixtureMiss { .. }
        | Error::InsufficientData { .. } => 3,
        Error::SccCapacity { .. } => 4,
        Error::VerificationMismatch(_) => 5,
        _ => 1,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lcos",
    version,
    about = "Causal order search from LLM consistency scores"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a consistency matrix for a dataset.
    Query(QueryArgs),
    /// Find every maximally consistent order for a matrix.
    Solve(SolveArgs),
    /// Score a distribution against the dataset's reference graph.
    Eval(EvalArgs),
    /// Query, solve and evaluate in one run.
    Pipeline(PipelineArgs),
    /// Convert edge lists to datasets, or matrices between CSV and JSON.
    #[command(subcommand)]
    Convert(ConvertCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    Live,
    Replay,
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Exclusion,
    Dp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    CountAsFalse,
    ReaskNextVerb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplingArg {
    Binomial,
    Expected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum CoeNorm {
    PerVertex,
    PerPair,
    PerDescEdge,
}

impl From<CoeNorm> for CoeMode {
    fn from(n: CoeNorm) -> Self {
        match n {
            CoeNorm::PerVertex => CoeMode::PerVertex,
            CoeNorm::PerPair => CoeMode::PerPair,
            CoeNorm::PerDescEdge => CoeMode::PerDescEdge,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value = "replay")]
    pub oracle: OracleMode,
    /// Chat-completions URL for the live oracle.
    #[arg(
        long,
        env = "LCOS_ENDPOINT",
        default_value = "http://localhost:11434/v1/chat/completions"
    )]
    pub endpoint: String,
    #[arg(long, default_value = "llama3.1:8b")]
    pub model: String,
    /// JSON-lines response cache; required for replay.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Questions per ordered pair, one verb each.
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    /// File with one causal verb per line.
    #[arg(long)]
    pub verbs: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub retry_limit: u32,
    #[arg(long, value_enum, default_value = "count-as-false")]
    pub failure_policy: PolicyArg,
    #[arg(long, default_value_t = 4)]
    pub parallelism: usize,
    /// Seed for the synthetic oracle.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.9)]
    pub p_true: f64,
    #[arg(long, default_value_t = 0.1)]
    pub p_false: f64,
    #[arg(long, default_value_t = 0.5)]
    pub p_unrelated: f64,
    #[arg(long, value_enum, default_value = "binomial")]
    pub sampling: SamplingArg,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Largest strongly connected component the exact solver accepts.
    #[arg(long, default_value_t = lcos_core::mtr::DEFAULT_SCC_CAP)]
    pub scc_cap: usize,
    #[arg(long, value_enum, default_value = "exclusion")]
    pub engine: EngineArg,
    /// Disable skipping of exclusion sets that contain a known failure.
    #[arg(long)]
    pub no_prune: bool,
    /// Repeat non-informative removal until nothing changes.
    #[arg(long)]
    pub fixpoint_removal: bool,
    /// Put removed vertices back into every position of every order.
    #[arg(long)]
    pub insert_removed: bool,
    /// Cross-check against exhaustive search (at most 8 informative vertices).
    #[arg(long)]
    pub verify: bool,
    /// Also write the exclusion-search trace.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct EvalOpts {
    #[arg(long, value_enum, default_value = "per_pair")]
    pub coe_norm: CoeNorm,
    /// Ignore reference edges that touch removed vertices.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Matrix file, JSON or CSV (by extension).
    #[arg(long)]
    pub matrix: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub distribution: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub eval: EvalOpts,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub eval: EvalOpts,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ConvertCommand {
    /// Edge list (`a -> b`, `a,b` or `a b` per line) to a dataset JSON.
    Edges {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        name: String,
        /// Optional `{name: description}` JSON applied to the variables.
        #[arg(long)]
        descriptions: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Matrix between JSON and CSV, by file extension.
    Matrix {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}
