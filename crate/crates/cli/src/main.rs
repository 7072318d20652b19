//! `bellgraph`: batch front-end for loss analysis of graph-state Bell tests.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 budget or size cap,
//! 3 verification failure.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bellgraph::families::FamilyKind;
use bellgraph::sweep::DEFAULT_BUDGET;
use bellgraph::verify::DEFAULT_SEED;
use bellgraph::{Error, Mode};

#[derive(Parser, Debug)]
#[command(
    name = "bellgraph",
    version,
    about = "Exact Bell-violation analysis of graph states under qubit loss"
)]
struct Cli {
    /// Evaluate sweeps on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-root expectations and verdicts for one or more loss sets.
    Analyze(AnalyzeArgs),
    /// Tolerance table over loss sizes, or minimal critical sets.
    Sweep(SweepArgs),
    /// Closed form against the statevector oracle.
    Verify(VerifyArgs),
    /// Expectations under a random loss pattern, sampled over p.
    Mixture(MixtureArgs),
    /// Built-in graph families.
    #[command(subcommand)]
    Family(FamilyCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    Induced,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    BestCase,
    WorstCase,
}

fn parse_kind(s: &str) -> Result<FamilyKind, String> {
    s.parse::<FamilyKind>().map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct GraphSource {
    /// Built-in family (ring, star, two-centered-ghz, dense-center).
    #[arg(long, value_parser = parse_kind, requires = "n", conflicts_with = "file")]
    pub family: Option<FamilyKind>,
    /// Number of vertices for --family.
    #[arg(long)]
    pub n: Option<usize>,
    /// Graph file: edge list (`n=<N>` header, `i j` lines) or JSON.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CandidateArgs {
    /// Restrict loss candidates to degree-one vertices.
    #[arg(long, conflicts_with = "candidates")]
    pub leaves_only: bool,
    /// Explicit candidate vertices, e.g. `6,7,8`.
    #[arg(long, value_delimiter = ',')]
    pub candidates: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Lost vertices, e.g. `2,5`.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["lose_leaves_of_root", "loss_size"])]
    pub lose: Option<Vec<usize>>,
    /// Lose the first --count leaves adjacent to this vertex.
    #[arg(long, requires = "count", conflicts_with = "loss_size")]
    pub lose_leaves_of_root: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Report every loss set of this size drawn from the candidates.
    #[arg(long)]
    pub loss_size: Option<usize>,
    #[command(flatten)]
    pub candidates: CandidateArgs,
    /// Most loss sets to enumerate before giving up.
    #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[command(flatten)]
    pub candidates: CandidateArgs,
    /// Largest loss size to tabulate.
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long, value_enum, default_value_t = SemanticsArg::BestCase)]
    pub semantics: SemanticsArg,
    #[arg(long, value_enum, default_value_t = BoundArg::Induced)]
    pub bound: BoundArg,
    /// List inclusion-minimal critical sets up to this size instead.
    #[arg(long)]
    pub critical: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_kind, conflicts_with_all = ["file", "random"])]
    pub family: Option<FamilyKind>,
    #[arg(long, conflicts_with = "random")]
    pub file: Option<PathBuf>,
    /// Number of random connected graphs (the default source).
    #[arg(long)]
    pub random: Option<usize>,
    /// Vertex count for --family and --random.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Check every loss set of size up to this.
    #[arg(long, default_value_t = 2, conflicts_with = "loss_size")]
    pub max_loss: usize,
    /// Check only loss sets of exactly this size.
    #[arg(long)]
    pub loss_size: Option<usize>,
    /// Most loss sets per graph.
    #[arg(long, default_value_t = 500)]
    pub loss_cap: usize,
    /// Also compare |0⟩, |1⟩ and maximally mixed replacements.
    #[arg(long)]
    pub replacement_invariance: bool,
    /// Also cross-check through dense operators (graphs up to 8 vertices).
    #[arg(long)]
    pub dense: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct MixtureArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Loss distribution file, lines `p/q : i,j,k`. Defaults to one uniformly
    /// chosen candidate.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    #[command(flatten)]
    pub candidates: CandidateArgs,
    /// Root of the full-graph operator. Defaults to the smallest root.
    #[arg(long)]
    pub root: Option<usize>,
    /// Loss hypothesis defining the induced operator, e.g. `7`.
    #[arg(long, value_delimiter = ',')]
    pub hypothesis: Option<Vec<usize>>,
    /// Root of the induced operator. Defaults to --root.
    #[arg(long)]
    pub induced_root: Option<usize>,
    /// Explicit probabilities, e.g. `0,1/4,1`.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["grid", "p_max"])]
    pub p: Option<Vec<String>>,
    /// Number of evenly spaced grid points in [0, p-max).
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    #[arg(long, default_value = "1")]
    pub p_max: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// List the built-in families.
    List {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print a family instance as an edge list.
    Emit {
        #[arg(long, value_parser = parse_kind)]
        family: FamilyKind,
        #[arg(long)]
        n: usize,
        /// JSON instead of an edge list.
        #[arg(long)]
        json: bool,
    },
}

/// A failed run: message for stderr plus process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Report produced before the failure was detected; still printed.
    pub output: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
            output: String::new(),
        }
    }

    pub fn verification(message: impl Into<String>, output: String) -> Self {
        Failure {
            code: 3,
            message: message.into(),
            output,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::SizeCapExceeded { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
            output: String::new(),
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mode = if cli.sequential {
        Mode::Sequential
    } else {
        Mode::Parallel
    };
    match cli.command {
        Command::Analyze(a) => commands::analyze(&a, mode),
        Command::Sweep(a) => commands::sweep(&a, mode),
        Command::Verify(a) => commands::verify(&a, mode),
        Command::Mixture(a) => commands::mixture(&a),
        Command::Family(FamilyCommand::List { format }) => Ok(commands::family_list(format)),
        Command::Family(FamilyCommand::Emit { family, n, json }) => commands::family_emit(family, n, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            print!("{}", f.output);
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
