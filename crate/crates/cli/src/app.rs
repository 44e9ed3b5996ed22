use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use oddfan::finder::{find_odd_fan, peel_with_trace, DensityParams, SearchCertificate};
use oddfan::generators::{
    circulant, complete_multipartite, cycle, fan_graph, generalized_fan, gnp_random, petersen, rt_lower_construction,
    star, triangle_free_process, turan_graph, wheel, FanShape, PartGraph, TupleShape,
};
use oddfan::invariants::{max_independent_set, max_matching, Budget};
use oddfan::oracle::{exact_ex, exact_rt, ExtremalValue, Search};
use oddfan::{Graph, VertexSet};
use rand::SeedableRng;
use thiserror::Error;

use crate::format::{parse_graph, render_graph};
use crate::table::{density_table, render_tsv};

pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_INTERNAL: u8 = 70;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Internal(String),
    /// The reader went away, as with `| head`; not worth reporting.
    #[error("output closed")]
    OutputClosed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input { .. } => EXIT_DATA,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::OutputClosed => 0,
        }
    }
}

impl From<oddfan::Error> for CliError {
    fn from(e: oddfan::Error) -> Self {
        match e {
            oddfan::Error::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn io_failure(e: std::io::Error) -> CliError {
    match e.kind() {
        std::io::ErrorKind::BrokenPipe => CliError::OutputClosed,
        _ => CliError::Internal(format!("write failed: {e}")),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "oddfan",
    version,
    about = "Find odd-clique fans in dense graphs and audit them against exact oracles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph in the `p`/`e` text format.
    Generate {
        #[command(subcommand)]
        family: Family,
        /// Destination file; stdout when omitted.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Search for F_k(2r+1); exit 0 with a fan, 2 with a hypothesis violation.
    FindFan {
        graph: PathBuf,
        #[command(flatten)]
        params: FanParams,
        /// Certificate destination; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate against its graph; exit 0 if valid, 1 if not.
    Verify { graph: PathBuf, certificate: PathBuf },
    /// Peel low-degree vertices; exit 2 if too few survive.
    Peel {
        graph: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        c: f64,
    },
    /// Exact independence number and a maximum independent set.
    Alpha {
        graph: PathBuf,
        /// Branch-and-bound node limit; exit 2 with a lower bound when hit.
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Maximum matching.
    Matching { graph: PathBuf },
    /// Most edges of an n-vertex F_k(r)-free graph.
    Ex {
        n: usize,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Most edges of an n-vertex F_k(r)-free graph with alpha at most the cap.
    Rt {
        n: usize,
        #[arg(long)]
        alpha_cap: usize,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// TSV density table for the lower-bound construction.
    Table {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value = "c5")]
        part: PartGraph,
        /// Orders to tabulate, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [10, 20, 30, 40, 50, 60])]
        n: Vec<usize>,
    },
}

#[derive(Debug, Args)]
pub struct FanParams {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub k: usize,
    /// Clique order of the fan's blades plus centre.
    #[arg(long)]
    pub r: usize,
    /// Skip labellings that are not canonical.
    #[arg(long)]
    pub iso_filter: bool,
    /// Above the exhaustive ceiling, report the best of this many greedy runs.
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write an extremal graph here.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

impl OracleArgs {
    fn search(&self) -> Search {
        match self.restarts {
            Some(restarts) => Search::RandomRestarts {
                seed: self.seed,
                restarts,
            },
            None => Search::Exhaustive {
                iso_filter: self.iso_filter,
            },
        }
    }

    fn shape(&self) -> Result<FanShape, CliError> {
        Ok(FanShape::new(self.k, self.r)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Balanced complete r-partite graph.
    Turan {
        n: usize,
        r: usize,
    },
    /// Complete multipartite graph with the given part sizes.
    Multipartite {
        parts: Vec<usize>,
    },
    Complete {
        n: usize,
    },
    Empty {
        n: usize,
    },
    /// k copies of K_r sharing one vertex.
    Fan {
        k: usize,
        r: usize,
    },
    /// Generalized fan F_{k1,...,km}(2r+1).
    Gfan {
        #[arg(long)]
        r: usize,
        ks: Vec<usize>,
    },
    /// Complete r-partite join of triangle-free parts.
    RtLower {
        n: usize,
        r: usize,
        #[arg(long, default_value = "c5")]
        part: PartGraph,
    },
    /// Random triangle-free process.
    TfProcess {
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Erdős–Rényi G(n, p).
    Gnp {
        n: usize,
        p: f64,
        #[arg(long)]
        seed: u64,
    },
    Cycle {
        n: usize,
    },
    Star {
        leaves: usize,
    },
    Wheel {
        rim: usize,
    },
    Circulant {
        n: usize,
        offsets: Vec<usize>,
    },
    Petersen,
}

fn generate(family: &Family) -> Result<Graph, CliError> {
    Ok(match family {
        Family::Turan { n, r } => turan_graph(*n, *r)?,
        Family::Multipartite { parts } => complete_multipartite(parts),
        Family::Complete { n } => Graph::complete(*n),
        Family::Empty { n } => Graph::empty(*n),
        Family::Fan { k, r } => fan_graph(FanShape::new(*k, *r)?).graph,
        Family::Gfan { r, ks } => generalized_fan(&TupleShape::new(ks.clone(), *r)?).graph,
        Family::RtLower { n, r, part } => rt_lower_construction(*n, *r, part)?,
        Family::TfProcess { n, seed } => triangle_free_process(*n, &mut rand_chacha::ChaCha8Rng::seed_from_u64(*seed)),
        Family::Gnp { n, p, seed } => gnp_random(*n, *p, *seed)?,
        Family::Cycle { n } => cycle(*n),
        Family::Star { leaves } => star(*leaves),
        Family::Wheel { rim } => wheel(*rim),
        Family::Circulant { n, offsets } => circulant(*n, offsets),
        Family::Petersen => petersen(),
    })
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = read(path)?;
    parse_graph(&text).map_err(|e| CliError::Input {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

fn load_certificate(path: &Path) -> Result<SearchCertificate, CliError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

fn emit(out: &mut dyn Write, destination: Option<&Path>, text: &str) -> Result<(), CliError> {
    match destination {
        Some(path) => fs::write(path, text).map_err(io_failure),
        None => out.write_all(text.as_bytes()).map_err(io_failure),
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn set_line(s: &VertexSet) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs one command, writing its report to `out`. Returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Generate { family, output } => {
            let g = generate(&family)?;
            emit(out, output.as_deref(), &render_graph(&g))?;
            Ok(0)
        }
        Command::FindFan { graph, params, output } => {
            let g = load_graph(&graph)?;
            let cert = find_odd_fan(&g, params.k, params.r, params.eps)?;
            emit(out, output.as_deref(), &json(&cert)?)?;
            Ok(if cert.embedding().is_some() { 0 } else { EXIT_VIOLATION })
        }
        Command::Verify { graph, certificate } => {
            let g = load_graph(&graph)?;
            let cert = load_certificate(&certificate)?;
            match cert.replay(&g) {
                Ok(()) => {
                    writeln!(out, "valid").map_err(io_failure)?;
                    Ok(0)
                }
                Err(e) => {
                    writeln!(out, "invalid: {e}").map_err(io_failure)?;
                    Ok(EXIT_REJECTED)
                }
            }
        }
        Command::Peel { graph, beta, eps, c } => {
            let g = load_graph(&graph)?;
            let trace = peel_with_trace(&g, &DensityParams::new(beta, eps, c)?);
            match trace.outcome {
                Ok(survivors) => {
                    writeln!(out, "survivors {}", survivors.len()).map_err(io_failure)?;
                    writeln!(out, "{}", set_line(&survivors)).map_err(io_failure)?;
                    Ok(0)
                }
                Err(violation) => {
                    out.write_all(json(&violation)?.as_bytes()).map_err(io_failure)?;
                    Ok(EXIT_VIOLATION)
                }
            }
        }
        Command::Alpha { graph, max_nodes } => {
            let g = load_graph(&graph)?;
            let budget = max_nodes.map_or(Budget::UNLIMITED, Budget::nodes);
            match max_independent_set(&g, budget) {
                Ok(set) => {
                    writeln!(out, "alpha {}", set.len()).map_err(io_failure)?;
                    writeln!(out, "{}", set_line(&set.members)).map_err(io_failure)?;
                    Ok(0)
                }
                Err(exceeded) => {
                    writeln!(out, "alpha >= {} (node budget exhausted)", exceeded.best.len()).map_err(io_failure)?;
                    writeln!(out, "{}", set_line(&exceeded.best.members)).map_err(io_failure)?;
                    Ok(EXIT_VIOLATION)
                }
            }
        }
        Command::Matching { graph } => {
            let g = load_graph(&graph)?;
            let m = max_matching(&g);
            writeln!(out, "matching {}", m.len()).map_err(io_failure)?;
            for (u, v) in &m.edges {
                writeln!(out, "{u} {v}").map_err(io_failure)?;
            }
            Ok(0)
        }
        Command::Ex { n, oracle } => {
            let value = exact_ex(n, oracle.shape()?, oracle.search())?;
            report_extremal(out, Some(&value), &oracle)
        }
        Command::Rt { n, alpha_cap, oracle } => {
            let value = exact_rt(n, oracle.shape()?, alpha_cap, oracle.search())?;
            report_extremal(out, value.as_ref(), &oracle)
        }
        Command::Table { r, part, n } => {
            let rows = density_table(r, &part, &n)?;
            out.write_all(render_tsv(&rows).as_bytes()).map_err(io_failure)?;
            Ok(0)
        }
    }
}

fn report_extremal(out: &mut dyn Write, value: Option<&ExtremalValue>, oracle: &OracleArgs) -> Result<u8, CliError> {
    let Some(value) = value else {
        writeln!(out, "infeasible").map_err(io_failure)?;
        return Ok(0);
    };
    if value.exact {
        writeln!(out, "{}", value.edges).map_err(io_failure)?;
    } else {
        writeln!(out, ">= {}", value.edges).map_err(io_failure)?;
    }
    if let Some(path) = &oracle.witness {
        fs::write(path, render_graph(&value.witness)).map_err(io_failure)?;
    }
    Ok(0)
}
