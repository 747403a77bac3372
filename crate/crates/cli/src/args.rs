use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "GCM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "gcm", version, about = "Group closeness maximization on unweighted graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pick a group of k nodes and report its group closeness.
    GroupCloseness(GroupArgs),
    /// Rank the k nodes of highest individual closeness.
    TopK(TopKArgs),
    /// Solve small instances exactly and compare against greedy.
    Exact(ExactArgs),
    /// Write the integer program in CPLEX LP format.
    ExportIlp(IlpArgs),
    /// Overlap of the greedy group with top-k closeness and top-k degree.
    Overlap(OverlapArgs),
    /// Time several algorithms over several group sizes.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Edge list, one `u v` pair per line; `-` reads stdin.
    pub input: PathBuf,
    /// Single-character field separator (default: any whitespace).
    #[arg(long)]
    pub delimiter: Option<char>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ThreadArgs {
    /// Worker threads for gain evaluation [default: available cores].
    #[arg(long, env = THREADS_ENV, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
}

impl ThreadArgs {
    pub fn resolve(self) -> usize {
        self.threads
            .map(|t| t as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    #[value(name = "greedy++")]
    GreedyPp,
    #[value(name = "bitgreedy++")]
    BitGreedyPp,
    #[value(name = "greedy-ref")]
    GreedyRef,
    Exact,
    Degree,
    Topk,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::GreedyPp => "greedy++",
            Algo::BitGreedyPp => "bitgreedy++",
            Algo::GreedyRef => "greedy-ref",
            Algo::Exact => "exact",
            Algo::Degree => "degree",
            Algo::Topk => "topk",
        }
    }

    pub fn has_trace(self) -> bool {
        matches!(self, Algo::GreedyPp | Algo::BitGreedyPp | Algo::GreedyRef)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExactMethod {
    /// Every k-subset in lexicographic order.
    #[default]
    Enumerate,
    /// Branch and bound with a submodular gain bound.
    Bnb,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "greedy++")]
    pub algo: Algo,
    /// Group size.
    #[arg(short, long)]
    pub k: usize,
    #[command(flatten)]
    pub threads: ThreadArgs,
    /// Recompute every candidate gain each round.
    #[arg(long)]
    pub no_lazy: bool,
    /// Memory cap for the bit-parallel level vectors, in bytes.
    #[arg(long, default_value_t = gcm_core::bitgreedy::DEFAULT_MEMORY_CAP)]
    pub mem_cap: u64,
    /// Largest number of subsets the exact solver may enumerate.
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u128,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Also write the per-iteration gain trace as CSV.
    #[arg(long)]
    pub trace_csv: Option<PathBuf>,
    /// Accepted for interface stability; every algorithm is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct TopKArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(short, long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct ExactArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(short, long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t)]
    pub method: ExactMethod,
    /// Largest number of subsets to enumerate.
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u128,
    /// Node limit for branch and bound.
    #[arg(long, default_value_t = gcm_core::exact::DEFAULT_BNB_MAX_NODES)]
    pub max_nodes: usize,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct IlpArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(short, long)]
    pub k: usize,
    /// Output file (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = gcm_core::exact::DEFAULT_ILP_MAX_NODES)]
    pub max_nodes: usize,
}

#[derive(Args, Debug, Clone)]
pub struct OverlapArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// One or more group sizes, comma separated.
    #[arg(short, long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Algorithms to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "greedy++,bitgreedy++")]
    pub algos: Vec<Algo>,
    /// Group sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ks: Vec<usize>,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[arg(long)]
    pub no_lazy: bool,
    #[arg(long, default_value_t = gcm_core::bitgreedy::DEFAULT_MEMORY_CAP)]
    pub mem_cap: u64,
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u128,
    /// Fail if the greedy variants disagree on the distance sum.
    #[arg(long)]
    pub check_objective: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}
