//! Synthetic-SBOM performance sweeps: commitment time, proof generation
//! and verification time, record-file size, and proof wire size across a
//! grid of component counts and vulnerable-component counts.
//!
//! Synthetic SBOMs use components named `synthetic-<i>`; the first
//! `vulnerable` of them are replaced by `vuln-<i>` ids that a synthetic
//! advisory resolves to, so the number of (inclusion) proofs per query is
//! controlled exactly. With zero vulnerable components no query is made —
//! there is nothing to prove — and the proof columns read zero.

use std::time::{Instant, SystemTime};

use serde_json::json;

use zksbom_core::advisory::AdvisoryDb;
use zksbom_core::client;
use zksbom_core::model::{ComponentId, Ecosystem, VerdictKind};
use zksbom_core::sbom;
use zksbom_core::zks::{self, Seed};
use zksbom_operator::store::{self, CommitmentRecord};

pub const PERF_CVE: &str = "CVE-PERF-0001";

/// A CycloneDX document with `components` entries, the first `vulnerable`
/// of which carry the advisory-matching `vuln-<i>` names.
pub fn synthetic_sbom(components: usize, vulnerable: usize) -> Vec<u8> {
    assert!(vulnerable <= components, "vulnerable count exceeds components");
    let list: Vec<serde_json::Value> = (0..components)
        .map(|i| {
            let name = synthetic_name(i, vulnerable);
            json!({
                "type": "library",
                "name": name,
                "version": "1.0.0",
                "purl": format!("pkg:npm/{name}@1.0.0"),
            })
        })
        .collect();
    serde_json::to_vec_pretty(&json!({
        "bomFormat": "CycloneDX",
        "specVersion": "1.5",
        "components": list,
    }))
    .expect("synthetic document serializes")
}

fn synthetic_name(i: usize, vulnerable: usize) -> String {
    if i < vulnerable {
        format!("vuln-{i:05}")
    } else {
        format!("synthetic-{i:05}")
    }
}

/// The ids the synthetic advisory marks as affected.
pub fn vulnerable_ids(vulnerable: usize) -> Vec<ComponentId> {
    (0..vulnerable)
        .map(|i| {
            ComponentId::new(None, &format!("vuln-{i:05}"), "1.0.0", Ecosystem::Npm)
                .expect("synthetic id is valid")
        })
        .collect()
}

fn perf_advisory(vulnerable: usize) -> AdvisoryDb {
    let affected: Vec<String> = vulnerable_ids(vulnerable)
        .iter()
        .map(|c| c.canonical())
        .collect();
    let fixture = serde_json::to_vec(&json!([{ "id": PERF_CVE, "affected": affected }]))
        .expect("advisory fixture serializes");
    AdvisoryDb::from_bytes(&fixture, "synthetic").expect("synthetic advisory is valid")
}

/// One measured grid point. Times are totals for the row's whole query
/// (divide by `proof_count` for per-proof figures).
#[derive(Debug, Clone, serde::Serialize)]
pub struct PerfRow {
    pub components: usize,
    pub vulnerable: usize,
    pub commit_ms: f64,
    pub record_bytes: usize,
    pub proof_count: usize,
    pub proof_gen_ms: f64,
    pub proof_bytes: usize,
    pub verify_ms: f64,
}

#[derive(Debug, Clone)]
pub struct PerfReport {
    pub rows: Vec<PerfRow>,
}

impl PerfReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "components,vulnerable,commit_ms,record_bytes,proof_count,proof_gen_ms,proof_bytes,verify_ms\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.3},{},{},{:.3},{},{:.3}\n",
                r.components,
                r.vulnerable,
                r.commit_ms,
                r.record_bytes,
                r.proof_count,
                r.proof_gen_ms,
                r.proof_bytes,
                r.verify_ms,
            ));
        }
        out
    }
}

/// Measures every combination of the two count lists, with vulnerable
/// counts clamped to the component count (duplicates collapse).
pub fn run_perf_sweep(component_counts: &[usize], vulnerable_counts: &[usize]) -> PerfReport {
    let mut cases: std::collections::BTreeSet<(usize, usize)> = std::collections::BTreeSet::new();
    for &n in component_counts {
        for &v in vulnerable_counts {
            cases.insert((n, v.min(n)));
        }
    }
    let rows = cases.into_iter().map(|(n, v)| measure(n, v)).collect();
    PerfReport { rows }
}

fn measure(components: usize, vulnerable: usize) -> PerfRow {
    let document = synthetic_sbom(components, vulnerable);
    let report = sbom::parse_cyclonedx(&document).expect("synthetic document parses");
    let datastore = sbom::to_datastore(&report.document);
    let seed = Seed::generate();

    let start = Instant::now();
    let (commitment, state) = zks::commit(datastore, seed);
    let commit_ms = start.elapsed().as_secs_f64() * 1e3;

    let record = CommitmentRecord {
        commitment: commitment.clone(),
        seed,
        datastore: state.datastore().clone(),
        created_at: SystemTime::now(),
    };
    let record_bytes = store::render_record(&record).len();

    if vulnerable == 0 {
        return PerfRow {
            components,
            vulnerable,
            commit_ms,
            record_bytes,
            proof_count: 0,
            proof_gen_ms: 0.0,
            proof_bytes: 0,
            verify_ms: 0.0,
        };
    }

    let db = perf_advisory(vulnerable);
    let affected = db.resolve(PERF_CVE).expect("synthetic CVE resolves");

    let start = Instant::now();
    let proofs = client::build_component_proofs(&state, affected);
    let proof_gen_ms = start.elapsed().as_secs_f64() * 1e3;
    let proof_bytes = proofs.iter().map(|p| p.proof_hex.len() / 2).sum();

    let start = Instant::now();
    let verdict = client::consumer_verify_proofs(&commitment, PERF_CVE, &proofs, &db)
        .expect("synthetic CVE resolves");
    let verify_ms = start.elapsed().as_secs_f64() * 1e3;
    assert_eq!(
        verdict.kind,
        VerdictKind::Affected,
        "every vulnerable id is present by construction"
    );

    PerfRow {
        components,
        vulnerable,
        commit_ms,
        record_bytes,
        proof_count: proofs.len(),
        proof_gen_ms,
        proof_bytes,
        verify_ms,
    }
}
