//! The `bellsearch` command line: `sample`, `search`, `experiment`, `oracle`.
//!
//! Exit status is 0 on success, 1 for validation errors and 2 for I/O errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiment::{run_experiment, write_csv, write_svg, ExperimentConfig, ExperimentKind};
use crate::io::{read_dense, read_samples, write_samples};
use crate::oracle::{bell_distribution_dense, node_value_exact};
use crate::pauli::{coefficient, DenseState, PauliString, Prefix};
use crate::samplers::{random_stabilizer, sample_dense, sample_pauli_singleton, sample_stabilizer, SampleSet};
use crate::search::{find_above_threshold_with_budget, find_top_t, ValueSource, DEFAULT_BUDGET};

#[derive(Debug, Parser)]
#[command(
    name = "bellsearch",
    version,
    about = "Find the largest Pauli coefficients of a state from Bell samples"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a Bell sample file.
    Sample(SampleArgs),
    /// Run a threshold (p1:EPS) or top-t (p2:T) search over a sample file.
    Search(SearchArgs),
    /// Run a repeated sampling campaign and write CSV.
    Experiment(ExperimentArgs),
    /// Print exact coefficients, node weights or the Bell distribution.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// singleton:N, stabilizer:N:SEED or dense:FILE
    #[arg(long)]
    pub state: StateSpec,
    #[arg(long)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; the sample file goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub samples: PathBuf,
    /// p1:EPSILON or p2:T
    #[arg(long)]
    pub mode: SearchMode,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// singleton-p1 or stabilizer-p2
    #[arg(long)]
    pub kind: ExperimentKind,
    /// Comma-separated qubit counts.
    #[arg(long = "qubits", alias = "n", value_delimiter = ',')]
    pub qubits: Option<Vec<usize>>,
    /// Comma-separated shot counts M.
    #[arg(long, value_delimiter = ',')]
    pub shots: Option<Vec<usize>>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Leaves to recover for stabilizer-p2 (default 2^n).
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// CSV output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render the per-(n, M) means as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Fill the wall_ms column (makes the CSV run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub state: StateSpec,
    /// coeff:PAULI, node:PREFIX or dist
    #[arg(long)]
    pub query: OracleQuery,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Singleton(usize),
    Stabilizer { n: usize, seed: u64 },
    Dense(PathBuf),
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("invalid state spec {s:?}"));
        let mut parts = s.splitn(2, ':');
        let kind = parts.next().unwrap_or_default();
        let rest = parts.next().ok_or_else(bad)?;
        match kind {
            "singleton" => Ok(StateSpec::Singleton(rest.parse().map_err(|_| bad())?)),
            "stabilizer" => {
                let (n, seed) = rest.split_once(':').ok_or_else(bad)?;
                Ok(StateSpec::Stabilizer {
                    n: n.parse().map_err(|_| bad())?,
                    seed: seed.parse().map_err(|_| bad())?,
                })
            }
            "dense" if !rest.is_empty() => Ok(StateSpec::Dense(PathBuf::from(rest))),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SearchMode {
    Threshold(f64),
    TopT(usize),
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("invalid search mode {s:?}, expected p1:EPSILON or p2:T"));
        match s.split_once(':') {
            Some(("p1", eps)) => {
                let eps: f64 = eps.parse().map_err(|_| bad())?;
                if eps > 0.0 {
                    Ok(SearchMode::Threshold(eps))
                } else {
                    Err(bad())
                }
            }
            Some(("p2", t)) => match t.parse() {
                Ok(t) if t >= 1 => Ok(SearchMode::TopT(t)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleQuery {
    Coefficient(PauliString),
    Node(Prefix),
    Distribution,
}

impl FromStr for OracleQuery {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("coeff", nu)) => Ok(OracleQuery::Coefficient(nu.parse()?)),
            Some(("node", mu)) => Ok(OracleQuery::Node(mu.parse()?)),
            None if s == "dist" => Ok(OracleQuery::Distribution),
            _ => Err(Error::param(format!(
                "invalid query {s:?}, expected coeff:PAULI, node:PREFIX or dist"
            ))),
        }
    }
}

fn with_path(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| with_path(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| with_path(path, e))
}

fn dense_state(spec: &StateSpec) -> Result<DenseState> {
    match spec {
        StateSpec::Singleton(n) => DenseState::pauli_singleton(*n),
        StateSpec::Stabilizer { n, seed } => random_stabilizer(*n, *seed)?.to_dense(),
        StateSpec::Dense(path) => read_dense(open(path)?),
    }
}

fn cmd_sample(args: &SampleArgs) -> Result<()> {
    let samples: SampleSet = match &args.state {
        StateSpec::Singleton(n) => sample_pauli_singleton(*n, args.shots, args.seed)?,
        StateSpec::Stabilizer { n, seed } => sample_stabilizer(&random_stabilizer(*n, *seed)?, args.shots, args.seed)?,
        StateSpec::Dense(path) => sample_dense(&read_dense(open(path)?)?, args.shots, args.seed)?,
    };
    let summary = format!(
        "n={} M={} source={}",
        samples.num_qubits(),
        samples.num_runs(),
        samples.meta().source
    );
    match &args.out {
        Some(path) => {
            write_samples(&samples, create(path)?)?;
            println!("{summary}");
        }
        None => {
            write_samples(&samples, io::stdout().lock())?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_search(args: &SearchArgs) -> Result<()> {
    let samples = read_samples(open(&args.samples)?)?;
    let source = ValueSource::Sampled(&samples);
    let result = match args.mode {
        SearchMode::Threshold(eps) => find_above_threshold_with_budget(source, eps, args.budget)?,
        SearchMode::TopT(t) => find_top_t(source, t, args.budget)?,
    };
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "pauli,weight_estimate")?;
    for leaf in &result.found {
        writeln!(out, "{},{}", leaf.pauli, leaf.weight)?;
    }
    out.flush()?;
    eprintln!(
        "nodes_expanded={} leaves_emitted={} frontier_peak={} termination={}",
        result.stats.nodes_expanded, result.stats.leaves_emitted, result.stats.frontier_peak, result.termination
    );
    Ok(())
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<()> {
    let mut cfg = match args.kind {
        ExperimentKind::SingletonP1 => ExperimentConfig::singleton_p1(),
        ExperimentKind::StabilizerP2 => ExperimentConfig::stabilizer_p2(),
    };
    if let Some(q) = &args.qubits {
        cfg.qubits = q.clone();
    }
    if let Some(s) = &args.shots {
        cfg.shots = s.clone();
    }
    if let Some(r) = args.reps {
        cfg.repetitions = r;
    }
    cfg.epsilon = args.epsilon;
    cfg.t = args.t;
    cfg.seed = args.seed;
    cfg.budget = args.budget;
    cfg.record_timing = args.timing;

    let rows = run_experiment(&cfg)?;
    match &args.out {
        Some(path) => write_csv(&rows, create(path)?)?,
        None => write_csv(&rows, io::stdout().lock())?,
    }
    if let Some(path) = &args.svg {
        write_svg(&rows, cfg.kind, create(path)?)?;
    }
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<()> {
    let rho = dense_state(&args.state)?;
    match &args.query {
        OracleQuery::Coefficient(nu) => println!("{:?}", coefficient(&rho, nu)?),
        OracleQuery::Node(mu) => println!("{:?}", node_value_exact(&rho, mu)?.value()),
        OracleQuery::Distribution => {
            let mut out = BufWriter::new(io::stdout().lock());
            for (run, p) in bell_distribution_dense(&rho)?.iter() {
                writeln!(out, "{run} {p:?}")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Search(a) => cmd_search(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}

/// Parses `std::env::args`, runs, and maps errors to exit codes.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_specs() {
        assert_eq!("singleton:3".parse::<StateSpec>().unwrap(), StateSpec::Singleton(3));
        assert_eq!(
            "stabilizer:4:9".parse::<StateSpec>().unwrap(),
            StateSpec::Stabilizer { n: 4, seed: 9 }
        );
        assert_eq!(
            "dense:a:b.txt".parse::<StateSpec>().unwrap(),
            StateSpec::Dense("a:b.txt".into())
        );
        for bad in ["singleton", "singleton:x", "stabilizer:3", "dense:", "pure:2"] {
            assert!(bad.parse::<StateSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn modes_and_queries() {
        assert_eq!("p1:0.5".parse::<SearchMode>().unwrap(), SearchMode::Threshold(0.5));
        assert_eq!("p2:4".parse::<SearchMode>().unwrap(), SearchMode::TopT(4));
        for bad in ["p1:0", "p2:0", "p3:1", "p1"] {
            assert!(bad.parse::<SearchMode>().is_err(), "{bad}");
        }
        assert_eq!(
            "node:".parse::<OracleQuery>().unwrap(),
            OracleQuery::Node(Prefix::root())
        );
        assert_eq!("dist".parse::<OracleQuery>().unwrap(), OracleQuery::Distribution);
        assert!("coeff:".parse::<OracleQuery>().is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
