//! `yyknot`: knot invariants, braiding matrices, verification suites and
//! Yang-Yang numerics from the command line.

mod bethe;
mod eval;
mod flow;
mod lie;
mod matrices;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use yyknot::Exec;

#[derive(Parser, Debug)]
#[command(
    name = "yyknot",
    version,
    about = "HOMFLY invariants from A_n braiding matrices, and Yang-Yang numerics"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Run data-parallel work on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracket, writhe and HOMFLY invariant of a Morse diagram file.
    Eval(EvalArgs),
    /// Dump B, B⁻¹, M and M⁻¹.
    Matrices(RankArgs),
    /// Run exact verification suites.
    Verify(VerifyArgs),
    /// Solve the Bethe equations of a Yang-Yang problem file.
    Bethe(BetheArgs),
    /// Trace gradient flows of an Airy function or a Yang-Yang problem.
    Flow(FlowArgs),
    /// Fundamental weight chain, its Gram matrix and the duality check.
    Lie(RankArgs),
}

#[derive(Args, Debug)]
pub struct RankArgs {
    /// Rank n of A_n.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    pub file: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Reverse the orientation of a component (repeatable).
    #[arg(long = "flip-component")]
    pub flip_component: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Seed for the isotopy random walk.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random moves per corpus diagram in the isotopy suite.
    #[arg(long, default_value_t = 12)]
    pub trials: usize,
    /// Corrupt the operators before checking.
    #[arg(long, default_value = "none", hide = true)]
    pub mutate: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    YangBaxter,
    Inverse,
    Reidemeister2,
    Fusion,
    Skein,
    Isotopy,
    All,
}

#[derive(Args, Debug)]
pub struct BetheArgs {
    pub problem: PathBuf,
    /// Override the breaking parameter.
    #[arg(long)]
    pub c: Option<f64>,
    /// Solve first at this breaking value and continue to the target.
    #[arg(long = "continue-from")]
    pub continue_from: Option<f64>,
    /// Newton start `re,im;re,im;...` (repeatable).
    #[arg(long = "start")]
    pub start: Vec<String>,
    /// Only the cluster split with this many roots at the first puncture (repeatable).
    #[arg(long)]
    pub split: Vec<usize>,
    /// Number of random starts when no starts or clusters apply.
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    /// Yang-Yang problem file (omit with --airy).
    pub problem: Option<PathBuf>,
    /// Airy function with λ = a + b i.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, conflicts_with = "problem")]
    pub airy: Option<Vec<f64>>,
    /// Scan λ = a + b i for a from A0 to A1 over SAMPLES points.
    #[arg(long = "airy-scan", num_args = 4, value_names = ["A0", "A1", "B", "SAMPLES"], allow_negative_numbers = true, conflicts_with_all = ["problem", "airy"])]
    pub airy_scan: Option<Vec<f64>>,
    /// Start `re,im;re,im;...`.
    #[arg(long)]
    pub start: Option<String>,
    /// Start at a solved critical point.
    #[arg(long = "start-at", value_enum)]
    pub start_at: Option<StartAt>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Flow up Re W instead of down.
    #[arg(long)]
    pub ascend: bool,
    /// Local error tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long = "t-max", default_value_t = 50.0)]
    pub t_max: f64,
    /// CSV destination for the trace.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StartAt {
    Critical,
}

/// What a command produced: rendered output and whether every check held.
pub struct Report {
    pub text: String,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let result = match &cli.command {
        Command::Eval(a) => eval::run(a, cli.format),
        Command::Matrices(a) => matrices::run(a, cli.format),
        Command::Verify(a) => verify::run(a, cli.format, exec),
        Command::Bethe(a) => bethe::run(a, cli.format, exec),
        Command::Flow(a) => flow::run(a, cli.format, exec),
        Command::Lie(a) => lie::run(a, cli.format),
    };
    match result {
        Ok(report) => {
            print!("{}", report.text);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
