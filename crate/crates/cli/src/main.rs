//! `mastkit`: agreement-subtree constructions, exact solvers, generators and
//! the experiment runner.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "mastkit", version, about = "Maximum agreement subtree toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a large agreement subtree with one of the constructions.
    Construct(ConstructArgs),
    /// Compute a maximum agreement subtree exactly.
    Exact(ExactArgs),
    /// Check whether a taxon set is an agreement set of two trees.
    Verify(VerifyArgs),
    /// Generate random or structured trees in Newick format.
    Gen(GenArgs),
    /// Run a grid of seeded trials and write one row per algorithm run.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct TreePair {
    /// Newick file holding the first tree.
    #[arg(long)]
    t1: PathBuf,
    /// Newick file holding the second tree.
    #[arg(long)]
    t2: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructAlgorithm {
    Weak,
    Main,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    trees: TreePair,
    #[arg(long, value_enum, default_value = "main")]
    algorithm: ConstructAlgorithm,
    /// Constant of the chosen construction (defaults: weak 4, main 40).
    #[arg(long = "C", value_name = "C")]
    c: Option<usize>,
    /// Seed for child orientation when rooting; canonical orientation if absent.
    #[arg(long, env = "MASTKIT_SEED")]
    seed: Option<u64>,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Dp,
    Brute,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    trees: TreePair,
    #[arg(long, value_enum, default_value = "dp")]
    method: Method,
    /// Treat both inputs as rooted trees.
    #[arg(long)]
    rooted: bool,
    /// Largest accepted leaf count (defaults: dp 512 unrooted / 2048 rooted, brute 10).
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    trees: TreePair,
    /// Comma-separated taxon labels.
    #[arg(long)]
    set: String,
    #[arg(long)]
    rooted: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenModel {
    Uniform,
    Caterpillar,
    Balanced,
    /// A balanced tree and a randomly labeled caterpillar, one per line.
    Adversarial,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: GenModel,
    #[arg(long)]
    n: usize,
    #[arg(long, env = "MASTKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Second output file for the adversarial model.
    #[arg(long)]
    out2: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExperimentModel {
    Uniform,
    Adversarial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExperimentAlgorithm {
    Weak,
    Main,
    ExactDp,
    Brute,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 16)]
    n_min: usize,
    #[arg(long, default_value_t = 1024)]
    n_max: usize,
    /// Ratio between consecutive grid sizes.
    #[arg(long, default_value_t = 2.0)]
    step_factor: f64,
    /// Seeded trials per model and size.
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "uniform,adversarial")]
    model: Vec<ExperimentModel>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "weak,main,exact-dp")]
    algorithm: Vec<ExperimentAlgorithm>,
    /// Base seed; trial `i` uses `seed + i`.
    #[arg(long, env = "MASTKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Leaf cap for the exact solver.
    #[arg(long)]
    cap: Option<usize>,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append to the output file instead of truncating it.
    #[arg(long)]
    append: bool,
    /// Write a JSON array instead of CSV.
    #[arg(long)]
    json: bool,
    /// Record wall-clock milliseconds; 0 otherwise.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Exact(a) => commands::exact(a),
        Command::Verify(a) => commands::verify(a),
        Command::Gen(a) => commands::gen(a),
        Command::Experiment(a) => commands::experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mastkit: {e}");
            e.exit_code()
        }
    }
}
