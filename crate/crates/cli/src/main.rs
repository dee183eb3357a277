//! Command-line front end: orient single networks, generate corpora, and
//! run the benchmark harness.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "netorient",
    version,
    about = "Orient undirected binary phylogenetic networks into rooted network classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a network file admits an orientation in a class.
    ///
    /// Exit code 0 when an orientation is found, 1 on NO or PROBABLY_NO,
    /// 2 on errors and timeouts.
    Orient(OrientArgs),
    /// Generate random networks into a directory.
    Gen(GenArgs),
    /// Run solvers over a corpus directory and write per-instance and
    /// summary CSV files.
    Bench(BenchArgs),
    /// Print the minimal cycle basis of a network, one cycle per line.
    Basis(BasisArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Exact,
    Heuristic,
    Baseline,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Exact => "exact",
            Algo::Heuristic => "heuristic",
            Algo::Baseline => "baseline",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ClassArg {
    #[value(name = "tree-child")]
    TreeChild,
    #[value(name = "stack-free")]
    StackFree,
    Any,
}

impl ClassArg {
    pub fn predicate(self) -> netorient::solvers::ClassPredicate {
        use netorient::solvers::ClassPredicate;
        match self {
            ClassArg::TreeChild => ClassPredicate::tree_child(),
            ClassArg::StackFree => ClassPredicate::stack_free(),
            ClassArg::Any => ClassPredicate::any(),
        }
    }
}

#[derive(Args)]
struct OrientArgs {
    /// Undirected network file.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    algo: Algo,
    #[arg(long = "class", value_enum, default_value = "tree-child")]
    class_: ClassArg,
    /// Wall-clock limit in seconds; 0 disables the limit.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
    /// Worker threads for placement evaluation.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Placement budget for the baseline solver.
    #[arg(long, default_value_t = 50_000_000)]
    baseline_budget: u128,
    /// Where to write the orientation (default: <file>.oriented.txt).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an extended Newick rendering next to the output file.
    #[arg(long)]
    newick: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Number of leaves per network.
    #[arg(long)]
    leaves: u32,
    /// Split (reticulation) probability in [0, 1).
    #[arg(long)]
    pr: f64,
    /// Base seed; file i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How many networks to generate.
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of undirected network files (*.txt).
    #[arg(long)]
    corpus: PathBuf,
    /// Comma-separated solvers to run.
    #[arg(long, value_delimiter = ',', default_values_t = vec![Algo::Exact, Algo::Heuristic, Algo::Baseline], value_enum)]
    algos: Vec<Algo>,
    #[arg(long = "class", value_enum, default_value = "tree-child")]
    class_: ClassArg,
    /// Per (instance, solver) wall-clock limit in seconds; 0 disables.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
    /// Instances evaluated concurrently.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Placement budget for the baseline solver.
    #[arg(long, default_value_t = 50_000_000)]
    baseline_budget: u128,
    /// Per-instance CSV output path; a summary lands next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BasisArgs {
    /// Undirected network file.
    file: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Orient(args) => commands::cmd_orient(args),
        Command::Gen(args) => commands::cmd_gen(args),
        Command::Bench(args) => bench::cmd_bench(args),
        Command::Basis(args) => commands::cmd_basis(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
