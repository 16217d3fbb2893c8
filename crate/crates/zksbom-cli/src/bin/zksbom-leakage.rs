//! Leakage analysis over dependency-count data: per-ecosystem expected
//! components revealed by one inclusion or one non-inclusion proof.

use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use zksbom_core::leakage::{self, DEFAULT_P_AC};

/// Aggregate dependency counts and print expected proof leakage per
/// ecosystem.
#[derive(Parser)]
#[command(name = "zksbom-leakage", version)]
struct Cli {
    /// CSV input with header `ecosystem,component,transitive_count,peer_count`.
    #[arg(long)]
    input: PathBuf,

    /// Probability that a component has a unique ancestor.
    #[arg(long, default_value_t = DEFAULT_P_AC)]
    p_ac: f64,

    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let file = File::open(&cli.input).map_err(|e| format!("{}: {e}", cli.input.display()))?;
    let records = leakage::read_records(file).map_err(|e| e.to_string())?;
    let stats = leakage::aggregate_stats(&records, cli.p_ac).map_err(|e| e.to_string())?;
    match cli.format {
        Format::Table => print!("{}", leakage::emit_table(&stats)),
        Format::Csv => print!("{}", leakage::emit_csv(&stats)),
    }
    Ok(())
}
