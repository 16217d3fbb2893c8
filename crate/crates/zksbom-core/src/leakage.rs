//! Quantifying what one proof gives away.
//!
//! A single inclusion proof names one component; with public ecosystem
//! metadata an observer can then infer more. Writing `d = E[DC]` for the
//! expected transitive (descendant) components per component, `pc = E[PC]`
//! for expected peers, and `p = P[AC]` for the probability of a unique
//! ancestor (a component whose presence is implied by its sole dependent):
//!
//! ```text
//! E[L_i] = (1 − p)·(d + pc·(1 + d)) + p·d
//! E[DC_u] = p·d
//! E[L_e] = (1 − p)·(E[DC_u] + pc·(1 + E[DC_u])) + p·(1 + E[DC_u])
//! ```
//!
//! `E[L_i]` is the expected number of additional components revealed as
//! present by one inclusion proof; `E[L_e]` the expected number revealed as
//! absent by one non-inclusion proof (absence of a component implies absence
//! of anything that could only have arrived through it).
//!
//! Ecosystem averages come from a CSV of per-component dependency counts;
//! `p` is a parameter (default [`DEFAULT_P_AC`]) because no public dataset
//! measures unique-ancestor frequency directly.

use std::collections::BTreeMap;
use std::io::Read;

use serde::Deserialize;
use thiserror::Error;

use crate::model::Ecosystem;

/// Default probability of a unique ancestor.
pub const DEFAULT_P_AC: f64 = 0.01;

/// Errors from stats construction and CSV ingestion.
#[derive(Debug, Error)]
pub enum LeakageError {
    #[error("invalid stats: {0}")]
    InvalidStats(String),
    #[error("malformed dependency-count CSV: {0}")]
    MalformedCsv(String),
    #[error("no dependency-count records supplied")]
    EmptyInput,
}

/// Per-ecosystem inputs to the leakage formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcosystemStats {
    e_dc: f64,
    e_pc: f64,
    p_ac: f64,
}

impl EcosystemStats {
    pub fn new(e_dc: f64, e_pc: f64, p_ac: f64) -> Result<EcosystemStats, LeakageError> {
        if !e_dc.is_finite() || e_dc < 0.0 {
            return Err(LeakageError::InvalidStats(format!("e_dc = {e_dc}")));
        }
        if !e_pc.is_finite() || e_pc < 0.0 {
            return Err(LeakageError::InvalidStats(format!("e_pc = {e_pc}")));
        }
        if !p_ac.is_finite() || !(0.0..=1.0).contains(&p_ac) {
            return Err(LeakageError::InvalidStats(format!("p_ac = {p_ac}")));
        }
        Ok(EcosystemStats { e_dc, e_pc, p_ac })
    }

    pub fn e_dc(&self) -> f64 {
        self.e_dc
    }

    pub fn e_pc(&self) -> f64 {
        self.e_pc
    }

    pub fn p_ac(&self) -> f64 {
        self.p_ac
    }
}

/// Expected additional components revealed as present by one inclusion
/// proof: `(1 − p)·(d + pc·(1 + d)) + p·d`.
pub fn inclusion_leakage(stats: &EcosystemStats) -> f64 {
    let (d, pc, p) = (stats.e_dc, stats.e_pc, stats.p_ac);
    (1.0 - p) * (d + pc * (1.0 + d)) + p * d
}

/// Expected additional components revealed as absent by one non-inclusion
/// proof: with `d_u = p·d`, `(1 − p)·(d_u + pc·(1 + d_u)) + p·(1 + d_u)`.
pub fn exclusion_leakage(stats: &EcosystemStats) -> f64 {
    let (d, pc, p) = (stats.e_dc, stats.e_pc, stats.p_ac);
    let d_u = p * d;
    (1.0 - p) * (d_u + pc * (1.0 + d_u)) + p * (1.0 + d_u)
}

/// One row of the dependency-count input: how many transitive and peer
/// components one observed component drags in.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct DependencyCountRecord {
    pub ecosystem: Ecosystem,
    pub component: String,
    pub transitive_count: u64,
    pub peer_count: u64,
}

/// Reads `ecosystem,component,transitive_count,peer_count` CSV.
pub fn read_records(reader: impl Read) -> Result<Vec<DependencyCountRecord>, LeakageError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    {
        let headers = csv_reader
            .headers()
            .map_err(|e| LeakageError::MalformedCsv(e.to_string()))?;
        let expected = ["ecosystem", "component", "transitive_count", "peer_count"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(LeakageError::MalformedCsv(format!(
                "header {:?}, expected {expected:?}",
                headers.iter().collect::<Vec<_>>()
            )));
        }
    }
    csv_reader
        .deserialize()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| LeakageError::MalformedCsv(e.to_string()))
}

/// Per-ecosystem means of the supplied records, paired with the given
/// `p_ac`. Errors on an empty input; ecosystems with no records simply
/// don't appear in the output.
pub fn aggregate_stats(
    records: &[DependencyCountRecord],
    p_ac: f64,
) -> Result<BTreeMap<Ecosystem, EcosystemStats>, LeakageError> {
    if records.is_empty() {
        return Err(LeakageError::EmptyInput);
    }
    let mut sums: BTreeMap<Ecosystem, (u64, u64, u64)> = BTreeMap::new();
    for r in records {
        let (n, transitive, peer) = sums.entry(r.ecosystem).or_default();
        *n += 1;
        *transitive += r.transitive_count;
        *peer += r.peer_count;
    }
    sums.into_iter()
        .map(|(eco, (n, transitive, peer))| {
            let stats =
                EcosystemStats::new(transitive as f64 / n as f64, peer as f64 / n as f64, p_ac)?;
            Ok((eco, stats))
        })
        .collect()
}

/// Rounds half-up to two decimals, the table convention.
fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn cell(x: f64) -> String {
    format!("{:.2}", round2(x))
}

/// `e_pc` prints as an en dash when no peer data exists (treated as 0 in
/// the arithmetic).
fn e_pc_cell(e_pc: f64) -> String {
    if e_pc == 0.0 {
        "–".to_string()
    } else {
        cell(e_pc)
    }
}

/// Aligned text table: one row per ecosystem with
/// `e_dc, e_pc, inclusion, exclusion`, two decimals, half-up.
pub fn emit_table(stats_by_ecosystem: &BTreeMap<Ecosystem, EcosystemStats>) -> String {
    let mut out = String::from("Ecosystem   E[DC], E[PC], E[L_i], E[L_e]\n");
    for (eco, stats) in stats_by_ecosystem {
        out.push_str(&format!(
            "{:<11} {}, {}, {}, {}\n",
            eco.display_name(),
            cell(stats.e_dc),
            e_pc_cell(stats.e_pc),
            cell(inclusion_leakage(stats)),
            cell(exclusion_leakage(stats)),
        ));
    }
    out
}

/// Machine-readable variant of [`emit_table`]; zero `e_pc` stays numeric.
pub fn emit_csv(stats_by_ecosystem: &BTreeMap<Ecosystem, EcosystemStats>) -> String {
    let mut out = String::from("ecosystem,e_dc,e_pc,inclusion_leakage,exclusion_leakage\n");
    for (eco, stats) in stats_by_ecosystem {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            eco.token(),
            cell(stats.e_dc),
            cell(stats.e_pc),
            cell(inclusion_leakage(stats)),
            cell(exclusion_leakage(stats)),
        ));
    }
    out
}
