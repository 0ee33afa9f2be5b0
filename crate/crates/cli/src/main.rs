//! `laglab`: colex/lex families, hypergraph Lagrangians, P2 maxima and the desk-scale checks.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or parse error.

mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use laglab_core::degrees::{p2, p2_max_bounded, p2_max_unbounded, DEFAULT_P2_SEARCH_CAP};
use laglab_core::hypergraph::{clique, colex_segment, lex_segment, parse_edge_list, write_edge_list};
use laglab_core::lagrangian::maximize_lagrangian;
use laglab_core::report::{format_f64, to_json};
use laglab_core::{Error, RGraph, SolverConfig};
use serde::Serialize;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "laglab", version, about = "Hypergraph Lagrangians and colex families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The first m r-sets in colex order, as an edge list.
    Colex { m: usize, r: usize },
    /// The first m r-subsets of [t] in lex order, as an edge list.
    Lex { m: usize, t: usize, r: usize },
    /// All r-subsets of [t], as an edge list.
    Clique { t: usize, r: usize },
    /// Maximize w(G) over the simplex for an edge-list file (`-` for stdin).
    Lagrangian {
        input: String,
        /// Also ascend from the uniform weighting on every support (t <= 6).
        #[arg(long)]
        support_scan: bool,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Sum of squared degrees of an edge-list file (`-` for stdin).
    P2 {
        input: String,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Largest sum of squared degrees over r-graphs with m edges, optionally on [t].
    P2Max {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: Option<usize>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Desk-scale verification runs.
    #[command(subcommand)]
    Verify(verify::VerifyCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Stationarity tolerance of the solver.
    #[arg(long, default_value_t = 1e-8, value_parser = positive_f64)]
    pub tol: f64,
    /// Random starts in addition to the uniform one.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub starts: u64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads, 0 = all cores.
    #[arg(long, env = "LAGLAB_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

/// The part of [`RunConfig`] that can change a report; recorded in every report.
#[derive(Clone, Debug, Serialize)]
pub struct ReportConfig {
    #[serde(serialize_with = "laglab_core::report::ser_f64")]
    pub tol: f64,
    pub starts: u64,
    pub max_iters: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            starts: self.starts as usize,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
            support_scan: false,
        }
    }

    pub fn report_config(&self) -> ReportConfig {
        ReportConfig { tol: self.tol, starts: self.starts, max_iters: self.max_iters, seed: self.seed }
    }

    fn install_threads(&self) -> Result<(), Failure> {
        if self.threads > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build_global()
                .map_err(|e| Failure::Usage(format!("cannot start {} threads: {e}", self.threads)))?;
        }
        Ok(())
    }

    pub fn emit(&self, body: &str) -> Result<(), Failure> {
        match &self.output {
            Some(path) => std::fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
            None => io::stdout().write_all(body.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
        }
    }
}

pub enum Failure {
    /// A verification assertion failed; the report has already been written.
    Verification(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_graph(input: &str) -> Result<RGraph, Failure> {
    let text = if input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{input}: {e}")))?
    };
    Ok(parse_edge_list(&text)?)
}

fn unsupported(format: Format, what: &str) -> Failure {
    Failure::Usage(format!("{what} has no {format:?} output").to_lowercase())
}

#[derive(Serialize)]
struct LagrangianReport {
    r: usize,
    t: usize,
    m: usize,
    config: ReportConfig,
    certificate: laglab_core::LagrangianCertificate,
}

#[derive(Serialize)]
struct P2Summary {
    r: usize,
    t: usize,
    m: usize,
    value: u64,
    degrees: Vec<usize>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Colex { m, r } => print!("{}", write_edge_list(&colex_segment(m, r)?)),
        Command::Lex { m, t, r } => print!("{}", write_edge_list(&lex_segment(m, t, r)?)),
        Command::Clique { t, r } => print!("{}", write_edge_list(&clique(t, r)?)),
        Command::Lagrangian { input, support_scan, run } => {
            run.install_threads()?;
            let g = read_graph(&input)?;
            let cfg = SolverConfig { support_scan, ..run.solver() };
            let cert = maximize_lagrangian(&g, &cfg);
            let body = match run.format {
                Format::Json => {
                    let report = LagrangianReport {
                        r: g.r(),
                        t: g.t(),
                        m: g.len(),
                        config: run.report_config(),
                        certificate: cert,
                    };
                    to_json("lagrangian", &report)
                }
                Format::Csv => {
                    let mut s = String::from("vertex,weight\n");
                    for (i, w) in cert.witness.as_slice().iter().enumerate() {
                        s += &format!("{},{}\n", i + 1, format_f64(*w));
                    }
                    s
                }
                Format::Text => format!(
                    "lambda {}\nconverged {}\nkkt_residual {}\nwitness {}\n",
                    format_f64(cert.value),
                    cert.converged,
                    format_f64(cert.kkt_max_residual),
                    cert.witness.as_slice().iter().map(|w| format_f64(*w)).collect::<Vec<_>>().join(" ")
                ),
            };
            run.emit(&body)?;
        }
        Command::P2 { input, run } => {
            let g = read_graph(&input)?;
            let summary = P2Summary { r: g.r(), t: g.t(), m: g.len(), value: p2(&g), degrees: g.degrees() };
            let body = match run.format {
                Format::Json => to_json("p2", &summary),
                Format::Text => format!("{}\n", summary.value),
                Format::Csv => return Err(unsupported(run.format, "p2")),
            };
            run.emit(&body)?;
        }
        Command::P2Max { r, m, t, run } => {
            let report = match t {
                Some(t) => p2_max_bounded(r, m, t, DEFAULT_P2_SEARCH_CAP)?,
                None => p2_max_unbounded(r, m)?,
            };
            let body = match run.format {
                Format::Json => to_json("p2_max", &report),
                Format::Text => format!("{}\n", report.value),
                Format::Csv => return Err(unsupported(run.format, "p2-max")),
            };
            run.emit(&body)?;
        }
        Command::Verify(cmd) => verify::run(cmd)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
