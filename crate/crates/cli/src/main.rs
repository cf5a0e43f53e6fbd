use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use taut_core::certify::{run_all, run_case, Registry, RunOptions, DEFAULT_SEED};
use taut_core::morse::{find_critical_set, HeightSpec, SearchConfig};
use taut_core::repbuilder::build_rep;
use taut_core::{Error, Result};

/// Numerical tautness certificates for registered representations.
#[derive(Parser)]
#[command(name = "taut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered cases.
    List,
    /// Certify one case and print its certificate as JSON.
    Run {
        #[arg(long)]
        case: String,
        #[arg(long, env = "TAUT_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Override the multi-start counts of the case.
        #[arg(long)]
        starts: Option<usize>,
        /// Override the critical-point acceptance tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify every registered case (or the listed ones).
    RunAll {
        #[arg(long)]
        cases: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, env = "TAUT_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write zero runtimes so that reruns are byte-identical.
        #[arg(long)]
        no_timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the representation of a case (basis matrices and summands) as JSON.
    Rep {
        case: String,
    },
    /// Critical set of a height function on the orbit of a case's base point.
    Critical {
        #[arg(long)]
        case: String,
        /// Height direction as a point literal; the base point by default.
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 500)]
        starts: usize,
        #[arg(long, env = "TAUT_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let registry = Registry::load()?;
    match cli.command {
        Command::List => {
            for c in &registry.cases {
                println!("{:<18} {:<18} {:<40} {}", c.id, c.expected.as_str(), c.rep, c.title);
            }
            Ok(0)
        }
        Command::Run { case, seed, starts, tol, out } => {
            let opts = RunOptions { master_seed: seed, starts, solve_tol: tol };
            let cert = run_case(&registry, &case, &opts)?;
            emit(&serde_json::to_string_pretty(&cert)?, out.as_ref())?;
            eprintln!("{}: {} (expected {})", cert.case, cert.verdict.as_str(), cert.expected.verdict.as_str());
            Ok(if cert.matches { 0 } else { 2 })
        }
        Command::RunAll { cases, jobs, seed, starts, format, no_timings, out } => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build_global()
                .map_err(|e| Error::Internal(e.to_string()))?;
            let opts = RunOptions { master_seed: seed, starts, solve_tol: None };
            let mut summary = run_all(&registry, &cases, &opts)?;
            if no_timings {
                summary = summary.without_timings();
            }
            let text = match format {
                Format::Json => summary.to_json()?,
                Format::Csv => summary.to_csv(),
            };
            emit(&text, out.as_ref())?;
            Ok(summary.exit_code() as u8)
        }
        Command::Rep { case } => {
            let rep = build_rep(&registry.get(&case)?.rep)?;
            println!("{}", rep.to_json()?);
            Ok(0)
        }
        Command::Critical { case, q, starts, seed } => {
            let spec = registry.get(&case)?;
            let rep = build_rep(&spec.rep)?;
            let literal = spec
                .point
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument(format!("case `{case}` has no base point")))?;
            let p = rep.parse_point(literal)?;
            let q = match q {
                Some(s) => rep.parse_point(&s)?,
                None => p.clone(),
            };
            let cfg = SearchConfig::for_rep(&rep, seed).with_starts(starts);
            let inv = find_critical_set(&rep, &p, &HeightSpec::height(q), &cfg)?;
            println!("{}", serde_json::to_string_pretty(&inv.record())?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
