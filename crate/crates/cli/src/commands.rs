use std::fs;
use std::path::Path;

use serde::Serialize;
use stochnet::exactlin::{symmetric_eigen, RealMatrix};
use stochnet::markov::{
    generate_graph, graph_laplacian, is_dirichlet, is_infinitesimal_stochastic, GraphSpec,
    SimpleGraph,
};
use stochnet::masterdyn::{
    ack_report, ack_state, distribution_csv, enumerate_states, evolve, master_hamiltonian,
    point_mass, ssa_sample, AckReport, SsaConfig,
};
use stochnet::netcore::{parse_network, NetworkJson, ReactionNetwork};
use stochnet::ratedyn::{deficiency_zero_equilibrium, integrate_rate};
use stochnet::structure::deficiency;

use crate::output::{emit, to_json};
use crate::{Command, Format, GraphArgs, MasterArgs, ParseFormat};

pub enum CliError {
    Io(String),
    Lib(stochnet::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use stochnet::Error as E;
        match self {
            CliError::Io(_) => 2,
            CliError::Lib(e) => match e {
                E::Syntax { .. }
                | E::UnknownSpecies { .. }
                | E::NonPositiveRate(_)
                | E::NoReactions
                | E::InvalidNetwork(_)
                | E::DimensionMismatch { .. }
                | E::InvalidParameter(_)
                | E::NotSymmetric(_) => 2,
                E::Internal(_) => 3,
                E::Overflow | E::Numerical(_) | E::NoConvergence(_) => 4,
                E::Precondition(_) => 5,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<stochnet::Error> for CliError {
    fn from(e: stochnet::Error) -> Self {
        CliError::Lib(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(text: &str, out: Option<&Path>) -> Result<()> {
    emit(text, out).map_err(|e| CliError::Io(format!("cannot write output: {e}")))
}

fn load_network(path: &Path) -> Result<ReactionNetwork> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let json: NetworkJson = serde_json::from_str(&text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(ReactionNetwork::from_json(&json)?)
    } else {
        Ok(parse_network(&text)?)
    }
}

/// Worker count for parallel trials, from `CRN_THREADS` (default 1).
fn threads() -> Result<usize> {
    match std::env::var("CRN_THREADS") {
        Err(_) => Ok(1),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Io(format!("CRN_THREADS must be a positive integer, got `{v}`"))),
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Analyze(input) => {
            let n = load_network(&input.file)?;
            write(&to_json(&deficiency(&n)?), input.out.as_deref())
        }
        Command::Parse { input, format } => {
            let n = load_network(&input.file)?;
            let text = match format {
                ParseFormat::Json => to_json(&n.to_json()),
                ParseFormat::Text => n.canonical_text(),
            };
            write(&text, input.out.as_deref())
        }
        Command::RateEvolve { input, x0, t, dt } => {
            let n = load_network(&input.file)?;
            let traj = integrate_rate(&n, &x0, t, dt)?;
            write(&traj.to_csv(), input.out.as_deref())
        }
        Command::Equilibrium { input, tol } => {
            let n = load_network(&input.file)?;
            write(&to_json(&deficiency_zero_equilibrium(&n, tol)?), input.out.as_deref())
        }
        Command::Master(args) => master(args),
        Command::Graph(args) => graph(args),
    }
}

#[derive(Serialize)]
struct Distribution<'a> {
    t: f64,
    closed: bool,
    boundary_truncated: bool,
    drift: f64,
    renormalized: bool,
    states: &'a [Vec<u32>],
    probabilities: &'a [f64],
}

#[derive(Serialize)]
struct AckOutput<'a> {
    x: &'a [f64],
    #[serde(flatten)]
    report: AckReport,
    states: &'a [Vec<u32>],
    probabilities: &'a [f64],
}

fn master(args: MasterArgs) -> Result<()> {
    let n = load_network(&args.input.file)?;
    let out = args.input.out.as_deref();

    if args.ssa {
        let config = SsaConfig {
            t_end: args.t_end.expect("clap enforces --t-end"),
            seed: args.seed,
            trials: args.trials,
            bins: args.bins,
            threads: threads()?,
        };
        let result = ssa_sample(&n, &args.n0, config)?;
        return write(&to_json(&result.summary()), out);
    }

    let total: u64 = args.n0.iter().map(|&c| u64::from(c)).sum();
    let space = enumerate_states(&n, &args.n0, args.cap.unwrap_or(total))?;
    let h = master_hamiltonian(&n, &space);

    if args.equilibrium {
        let x = match args.x {
            Some(x) => x,
            None => deficiency_zero_equilibrium(&n, args.tol)?.x,
        };
        let psi = ack_state(&n, &x, &space, args.tol)?;
        let text = match args.format.unwrap_or(Format::Json) {
            Format::Csv => distribution_csv(&n, &space, &psi),
            Format::Json => to_json(&AckOutput {
                x: &x,
                report: ack_report(&h, &space, &psi, &x),
                states: space.states(),
                probabilities: &psi,
            }),
        };
        return write(&text, out);
    }

    let Some(t) = args.t else {
        return Err(CliError::Io("master needs one of --t, --equilibrium or --ssa".into()));
    };
    let r = evolve(&h, &point_mass(&space, &args.n0)?, t)?;
    let text = match args.format.unwrap_or(Format::Csv) {
        Format::Csv => distribution_csv(&n, &space, &r.psi),
        Format::Json => to_json(&Distribution {
            t,
            closed: space.is_closed(),
            boundary_truncated: h.boundary_truncated,
            drift: r.drift,
            renormalized: r.renormalized,
            states: space.states(),
            probabilities: &r.psi,
        }),
    };
    write(&text, out)
}

#[derive(Serialize)]
struct SpectrumJson {
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
}

#[derive(Serialize)]
struct DirichletJson {
    dirichlet: bool,
    infinitesimal_stochastic: bool,
    self_adjoint: bool,
}

fn load_graph(args: &GraphArgs) -> Result<(String, SimpleGraph)> {
    if let Some(spec) = &args.gen {
        let spec = GraphSpec::parse(&spec[0], &spec[1..])?;
        return Ok((spec.name(), generate_graph(spec)?));
    }
    let Some(path) = &args.file else {
        return Err(CliError::Io("graph needs --gen or --file".into()));
    };
    let rows: Vec<Vec<f64>> = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(CliError::Io(format!("{}: weight matrix is not square", path.display())));
    }
    let m = RealMatrix::from_rows(&rows)?;
    Ok(("g".into(), SimpleGraph::from_weight_matrix(&m)?))
}

fn graph(args: GraphArgs) -> Result<()> {
    let (name, g) = load_graph(&args)?;
    let out = args.out.as_deref();
    if args.dot {
        return write(&g.to_dot(&name), out);
    }
    let h = graph_laplacian(&g);
    if args.dirichlet_check {
        return write(
            &to_json(&DirichletJson {
                dirichlet: is_dirichlet(&h, args.tol),
                infinitesimal_stochastic: is_infinitesimal_stochastic(&h, args.tol),
                self_adjoint: h.asymmetry() <= args.tol,
            }),
            out,
        );
    }
    let grouped = symmetric_eigen(&h)?.spectrum.grouped(args.group_tol);
    let json = SpectrumJson {
        eigenvalues: grouped.iter().map(|g| g.0).collect(),
        multiplicities: grouped.iter().map(|g| g.1).collect(),
    };
    write(&to_json(&json), out)
}
