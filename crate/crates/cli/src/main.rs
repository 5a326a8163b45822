//! `crn`: structural analysis, deterministic and stochastic dynamics, and
//! graph spectra for reaction networks.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "crn", version, about = "Reaction network analysis and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural report: components, deficiency, conservation laws.
    Analyze(InputArgs),
    /// Parse a network and print it in canonical form.
    Parse {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = ParseFormat::Json)]
        format: ParseFormat,
    },
    /// Integrate the rate equation with fixed-step RK4; prints CSV.
    RateEvolve {
        #[command(flatten)]
        input: InputArgs,
        /// Initial concentrations, comma separated, in species order.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        x0: Vec<f64>,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
    /// Positive equilibrium of a weakly reversible deficiency-zero network.
    Equilibrium {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Master equation on the states reachable from n0.
    Master(MasterArgs),
    /// Laplacian spectrum or Dirichlet check of a generated or loaded graph.
    Graph(GraphArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Network file: the text format, or JSON when the name ends in `.json`.
    file: PathBuf,
    /// Write output here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ParseFormat {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct MasterArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Initial population, comma separated, in species order.
    #[arg(long, value_delimiter = ',', required = true)]
    n0: Vec<u32>,
    /// Bound on the total molecule count of enumerated states.
    #[arg(long)]
    cap: Option<u64>,
    /// Evolve the point mass at n0 for this long.
    #[arg(long, conflicts_with_all = ["equilibrium", "ssa"])]
    t: Option<f64>,
    /// Product-Poisson equilibrium on the enumerated states.
    #[arg(long, conflicts_with = "ssa")]
    equilibrium: bool,
    /// Poisson means for --equilibrium; defaults to the deficiency-zero equilibrium.
    #[arg(long, value_delimiter = ',', requires = "equilibrium")]
    x: Option<Vec<f64>>,
    /// Gillespie simulation up to --t-end.
    #[arg(long, requires = "t_end")]
    ssa: bool,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Generator name followed by its integer arguments, e.g. `cycle 3`.
    #[arg(long, num_args = 1.., conflicts_with = "file", value_name = "NAME [ARGS]")]
    gen: Option<Vec<String>>,
    /// JSON file holding a symmetric weight matrix (array of rows).
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["dirichlet_check", "dot"])]
    spectrum: bool,
    #[arg(long, conflicts_with = "dot")]
    dirichlet_check: bool,
    /// Graphviz output.
    #[arg(long)]
    dot: bool,
    /// Eigenvalues closer than this are reported as one with multiplicity.
    #[arg(long, default_value_t = stochnet::exactlin::DEFAULT_GROUPING_TOL)]
    group_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("crn: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
