//! Scenario runner and performance sweeps.
//!
//! `run` executes one scenario file and prints its transcript; it exits 0
//! when the run reaches its expected end state (honest completion, or
//! attack detected) and 2 otherwise. `perf` sweeps synthetic SBOM sizes
//! and emits timing/size CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zksbom_cli::{run_adversarial, run_happy_path, run_perf_sweep, Adversary, Scenario};

/// Protocol simulation: scenario runs and synthetic performance sweeps.
#[derive(Parser)]
#[command(name = "zksbom-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and print its transcript.
    Run {
        /// Scenario JSON file; fixture paths inside it resolve relative to
        /// the file.
        scenario: PathBuf,
    },
    /// Measure commitment, proof, and verification costs over synthetic
    /// SBOMs.
    Perf {
        /// Component-count range `start..end` (inclusive ends).
        #[arg(long, default_value = "0..1000")]
        components: String,
        /// Step between component counts.
        #[arg(long, default_value_t = 100)]
        step: usize,
        /// Comma-separated vulnerable-component counts (clamped to the
        /// component count).
        #[arg(long, default_value = "1")]
        vulnerable: String,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Run { scenario } => {
            let scenario = Scenario::load(&scenario).map_err(|e| e.to_string())?;
            let transcript = if scenario.adversary == Adversary::None {
                run_happy_path(&scenario)
            } else {
                run_adversarial(&scenario)
            }
            .map_err(|e| e.to_string())?;
            print!("{}", transcript.render());
            Ok(ExitCode::SUCCESS)
        }
        Command::Perf {
            components,
            step,
            vulnerable,
            out,
        } => {
            let counts = parse_range(&components, step)?;
            let vulnerable = parse_list(&vulnerable)?;
            let report = run_perf_sweep(&counts, &vulnerable);
            let csv = report.to_csv();
            match out {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| format!("{}: {e}", path.display()))?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Parses `start..end` into inclusive stepped counts; a bare number is a
/// single count.
fn parse_range(spec: &str, step: usize) -> Result<Vec<usize>, String> {
    if step == 0 {
        return Err("--step must be positive".into());
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("malformed count {s:?}"))
    };
    match spec.split_once("..") {
        Some((start, end)) => {
            let (start, end) = (parse(start)?, parse(end)?);
            if end < start {
                return Err(format!("empty range {spec:?}"));
            }
            let mut counts: Vec<usize> = (start..=end).step_by(step).collect();
            if counts.last() != Some(&end) {
                counts.push(end);
            }
            Ok(counts)
        }
        None => Ok(vec![parse(spec)?]),
    }
}

fn parse_list(spec: &str) -> Result<Vec<usize>, String> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("malformed count {s:?}"))
        })
        .collect()
}
