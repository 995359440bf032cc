mod cache;
mod commands;
mod render;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use tropmod::CollapseConfig;

use cache::Cache;
use commands::{Check, DeltaRequest, SpaceSelection};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(tropmod::Error),
    Io(io::Error),
}

impl CliError {
    pub fn from_json(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_consistency_failure() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<tropmod::Error> for CliError {
    fn from(e: tropmod::Error) -> Self {
        match e {
            tropmod::Error::GenusOutOfRange(_) | tropmod::Error::Parse(_) => CliError::Usage(e.to_string()),
            e => CliError::Core(e),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

/// Moduli spaces of tropical curves: stable graphs, Δ_g, cubical fibers and X_{g,n}.
#[derive(Parser, Debug)]
#[command(name = "tropmod", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for cached results.
    #[arg(long, global = true, env = "TROPMOD_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest genus accepted without --allow-large-genus.
    #[arg(long, global = true, default_value_t = 5)]
    max_genus: usize,
    #[arg(long, global = true)]
    allow_large_genus: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List stable graphs of a genus, or their forest filtrations.
    Enumerate {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        filtered: bool,
    },
    /// The complex Δ_g: cell counts, checks, collapse search, 1-skeleton.
    Delta {
        #[arg(long)]
        genus: usize,
        /// Comma-separated checks; bare --check runs all of them.
        #[arg(long, value_enum, value_delimiter = ',', num_args = 0..)]
        check: Option<Vec<Check>>,
        #[arg(long)]
        collapse: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Elementary collapses per restart.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
    /// The quotient cubical complex over one filtered graph.
    Fiber {
        #[arg(long)]
        genus: usize,
        /// Canonical form in hex, as printed by `enumerate`.
        #[arg(long)]
        class: String,
        #[arg(long)]
        n: usize,
        /// List one representative per cube orbit.
        #[arg(long)]
        orbits: bool,
    },
    /// The CW complex X_{g,n}.
    Space {
        #[arg(long)]
        genus: usize,
        /// Number of marked points; with --sweep, the largest one.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        poly: bool,
        #[arg(long)]
        euler: bool,
        #[arg(long)]
        homology: bool,
        #[arg(long)]
        asymptotic: bool,
        /// One row per n in 0..=N (CSV by default).
        #[arg(long)]
        sweep: bool,
    },
    /// Recompute the published values and compare.
    Reproduce {
        #[arg(long)]
        json: bool,
        /// Add report-only rows (genus 4, X_{2,3}).
        #[arg(long)]
        explore: bool,
    },
}

fn check_genus(genus: usize, g: &Global) -> Result<(), CliError> {
    if genus == 0 {
        return Err(CliError::Usage("genus must be at least 1".into()));
    }
    if genus > g.max_genus && !g.allow_large_genus {
        return Err(CliError::Usage(format!(
            "genus {genus} exceeds --max-genus {}; pass --allow-large-genus to run anyway",
            g.max_genus
        )));
    }
    Ok(())
}

fn render(v: &Value, format: Format, preferred: &[&str]) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(v).map_err(CliError::from_json)? + "\n",
        Format::Csv => render::csv(v, preferred),
        Format::Text => render::text(v, preferred),
        Format::Dot => return Err(CliError::Usage("DOT output is available for enumerate and delta".into())),
    })
}

struct Report {
    text: String,
    /// Written out, then the run exits as a consistency failure.
    failed: bool,
}

impl From<String> for Report {
    fn from(text: String) -> Self {
        Report { text, failed: false }
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let cache = if g.no_cache { Cache::disabled() } else { Cache::new(g.cache_dir.clone()) };
    match cli.command {
        Command::Enumerate { genus, filtered } => {
            check_genus(genus, g)?;
            let rows = commands::enumerate(&cache, genus, filtered)?;
            match g.format.unwrap_or(Format::Json) {
                Format::Dot => Ok(render::graphs_dot(&rows).into()),
                f => render(&rows, f, &["canonical", "vertices", "edges", "autOrder", "depth"]).map(Report::from),
            }
        }
        Command::Delta {
            genus,
            check,
            collapse,
            seed,
            budget,
            restarts,
        } => {
            check_genus(genus, g)?;
            let format = g.format.unwrap_or(Format::Json);
            let mut checks = match check {
                Some(c) if c.is_empty() => vec![Check::Purity, Check::Connectivity, Check::Euler, Check::Identities],
                Some(c) => c,
                None => Vec::new(),
            };
            checks.sort();
            checks.dedup();
            let req = DeltaRequest {
                genus,
                checks,
                collapse: collapse.then_some(CollapseConfig { seed, budget, restarts }),
                dot: format == Format::Dot,
            };
            let v = commands::delta(&cache, &req)?;
            match format {
                Format::Dot => Ok(v["dot"].as_str().unwrap_or_default().to_string().into()),
                f => render(&v, f, &["genus", "cells", "dimension"]).map(Report::from),
            }
        }
        Command::Fiber { genus, class, n, orbits } => {
            check_genus(genus, g)?;
            let v = commands::fiber(&cache, genus, &class, n, orbits)?;
            render(&v, g.format.unwrap_or(Format::Json), &["canonical", "genus", "n", "poly", "euler"]).map(Report::from)
        }
        Command::Space {
            genus,
            n,
            poly,
            euler,
            homology,
            asymptotic,
            sweep,
        } => {
            check_genus(genus, g)?;
            if sweep {
                let v = commands::sweep(&cache, genus, n, homology)?;
                render(&v, g.format.unwrap_or(Format::Csv), &["n", "euler", "poly", "betti"]).map(Report::from)
            } else {
                let sel = SpaceSelection {
                    poly,
                    euler,
                    homology,
                    asymptotic,
                };
                let v = commands::space(&cache, genus, n, sel)?;
                render(&v, g.format.unwrap_or(Format::Json), &["cells", "betti", "euler", "poly"]).map(Report::from)
            }
        }
        Command::Reproduce { json, explore } => {
            let (table, ok) = commands::reproduce(&cache, explore)?;
            let format = if json { Format::Json } else { g.format.unwrap_or(Format::Text) };
            let out = match format {
                Format::Text => render::claims(&table),
                f => render(&table, f, &["id", "status", "claim", "expected", "computed"])?,
            };
            Ok(Report { text: out, failed: !ok })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let output = cli.global.output.clone();
    match run(cli) {
        Ok(report) => {
            let written = match output {
                Some(path) => fs::write(&path, &report.text),
                None => io::stdout().write_all(report.text.as_bytes()),
            };
            match written {
                Ok(()) if report.failed => {
                    eprintln!("error: some claims failed");
                    ExitCode::from(2)
                }
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
