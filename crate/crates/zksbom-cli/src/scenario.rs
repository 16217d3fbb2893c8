//! Scenario files and the in-process protocol runner.
//!
//! A scenario names an SBOM fixture, an advisory fixture, the CVE ids to
//! query, and an adversary. The runner instantiates every actor in one
//! process with direct calls, which makes attack injection points exact:
//! each adversarial variant corrupts one specific hand-off and the
//! transcript records where the protocol catches it.
//!
//! Adversaries and their expected detection points:
//!
//! | adversary              | attack                                            | detected by                         |
//! |------------------------|---------------------------------------------------|-------------------------------------|
//! | `tamper-operator`      | commits to an altered component set               | supplier commitment recomputation   |
//! | `forge-proof-consumer` | mutates proof claims in transit                   | consumer verdict `Invalid`          |
//! | `retroactive-hide`     | answers from a doctored state missing a component | proof fails against the commitment  |
//! | `repudiate`            | supplier denies having published                  | signature over the logged binding   |
//! | `split-view`           | second commitment for the same artifact           | log rejects the duplicate           |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use zksbom_core::advisory::AdvisoryDb;
use zksbom_core::client;
use zksbom_core::crypto::{self, Keypair};
use zksbom_core::model::{ComponentId, Digest, VerdictKind};
use zksbom_core::sbom;
use zksbom_core::tlog::{self, LogState, TlogError};
use zksbom_core::zks::{self, Commitment, Seed};
use zksbom_operator::Operator;

use crate::HarnessError;

/// Step names recorded when an attack is caught; tests assert on these.
pub const DETECT_SUPPLIER_CHECK: &str = "supplier-check-commitment";
pub const DETECT_CONSUMER_INVALID: &str = "consumer-verdict-invalid";
pub const DETECT_ZKS_VERIFY: &str = "zks-verify-rejected";
pub const DETECT_NON_REPUDIATION: &str = "signature-non-repudiation";
pub const DETECT_DUPLICATE_ARTIFACT: &str = "duplicate-artifact";

/// Deterministic supplier signing key for scenario runs.
const SUPPLIER_KEY_SEED: [u8; 32] = [0x5A; 32];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Adversary {
    #[default]
    None,
    TamperOperator,
    ForgeProofConsumer,
    RetroactiveHide,
    Repudiate,
    SplitView,
}

impl Adversary {
    pub const ALL_ATTACKS: [Adversary; 5] = [
        Adversary::TamperOperator,
        Adversary::ForgeProofConsumer,
        Adversary::RetroactiveHide,
        Adversary::Repudiate,
        Adversary::SplitView,
    ];
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    /// SBOM fixture; relative paths resolve against the scenario file.
    pub sbom: PathBuf,
    /// Advisory fixture; same resolution rule.
    pub advisories: PathBuf,
    pub cves: Vec<String>,
    #[serde(default)]
    pub adversary: Adversary,
}

impl Scenario {
    /// Loads a scenario file, resolving its fixture paths relative to the
    /// file's own directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Scenario, HarnessError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| HarnessError::Fixture(format!("{}: {e}", path.display())))?;
        let mut scenario: Scenario = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Fixture(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        scenario.sbom = base.join(&scenario.sbom);
        scenario.advisories = base.join(&scenario.advisories);
        Ok(scenario)
    }
}

/// One transcript line: who did what, and how it came out.
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub actor: String,
    pub step: String,
    pub outcome: String,
}

/// The full record of one scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct Transcript {
    pub scenario: String,
    pub steps: Vec<StepRecord>,
    pub verdicts: BTreeMap<String, VerdictKind>,
    /// For adversarial runs: the step name at which the attack was caught.
    pub detection: Option<String>,
}

impl Transcript {
    fn new(scenario: &str) -> Transcript {
        Transcript {
            scenario: scenario.to_string(),
            steps: Vec::new(),
            verdicts: BTreeMap::new(),
            detection: None,
        }
    }

    fn record(&mut self, actor: &str, step: &str, outcome: impl Into<String>) {
        self.steps.push(StepRecord {
            actor: actor.to_string(),
            step: step.to_string(),
            outcome: outcome.into(),
        });
    }

    pub fn render(&self) -> String {
        let mut out = format!("scenario: {}\n", self.scenario);
        for s in &self.steps {
            let _ = writeln!(out, "  [{:<8}] {:<26} {}", s.actor, s.step, s.outcome);
        }
        if !self.verdicts.is_empty() {
            out.push_str("verdicts:\n");
            for (cve, kind) in &self.verdicts {
                let _ = writeln!(out, "  {cve}: {kind:?}");
            }
        }
        if let Some(detection) = &self.detection {
            let _ = writeln!(out, "detection: {detection}");
        }
        out
    }
}

fn short(digest: &Digest) -> String {
    digest.to_hex()[..12].to_string()
}

fn read_fixture(path: &Path) -> Result<Vec<u8>, HarnessError> {
    fs::read(path).map_err(|e| HarnessError::Fixture(format!("{}: {e}", path.display())))
}

/// Brute-force ground truth for one CVE: intersect the SBOM's component
/// set with the advisory's affected list, no cryptography involved.
pub fn ground_truth(
    sbom_bytes: &[u8],
    db: &AdvisoryDb,
    cve_id: &str,
) -> Result<VerdictKind, HarnessError> {
    let report = sbom::parse_cyclonedx(sbom_bytes)?;
    let present: std::collections::BTreeSet<String> = report
        .document
        .components
        .iter()
        .map(|c| c.canonical())
        .collect();
    let affected = db.resolve(cve_id)?;
    Ok(if affected.iter().any(|a| present.contains(&a.canonical())) {
        VerdictKind::Affected
    } else {
        VerdictKind::NotAffected
    })
}

/// The state after an honest upload-check-publish prefix: what every
/// scenario shares before queries begin or an adversary deviates.
struct Deployment {
    sbom_bytes: Vec<u8>,
    db: AdvisoryDb,
    operator: Operator,
    /// Keeps the operator's record directory alive for the run.
    _store_dir: tempfile::TempDir,
    commitment: Commitment,
    seed: Seed,
    keypair: Keypair,
    log: LogState,
    artifact: Vec<u8>,
    artifact_hash: Digest,
    log_digest: Digest,
}

/// Runs upload, supplier recomputation, and publication honestly.
fn deploy(scenario: &Scenario, t: &mut Transcript) -> Result<Deployment, HarnessError> {
    let sbom_bytes = read_fixture(&scenario.sbom)?;
    let db = AdvisoryDb::load(&scenario.advisories)
        .map_err(|e| HarnessError::Fixture(e.to_string()))?;

    let store_dir = tempfile::tempdir()?;
    let operator = Operator::open(store_dir.path())?;

    let (commitment, seed) = operator.upload_sbom(&sbom_bytes)?;
    t.record(
        "operator",
        "commit-sbom",
        format!("commitment {}", short(&commitment.root)),
    );

    if !client::supplier_check_commitment(&sbom_bytes, &seed, &commitment)? {
        return Err(HarnessError::Protocol(
            "honest commitment failed supplier recomputation".into(),
        ));
    }
    t.record("supplier", "check-commitment", "recomputed root matches");

    // The artifact itself is opaque to the protocol; only its hash matters.
    let artifact = [scenario.name.as_bytes(), b"-release-artifact"].concat();
    let keypair = Keypair::from_seed(SUPPLIER_KEY_SEED);
    let mut log = LogState::new();
    let (artifact_hash, log_digest) =
        client::supplier_publish(&artifact, &commitment, &keypair, &mut log)?;
    t.record(
        "supplier",
        "publish",
        format!(
            "artifact {} at log digest {}",
            short(&artifact_hash),
            short(&log_digest)
        ),
    );

    Ok(Deployment {
        sbom_bytes,
        db,
        operator,
        _store_dir: store_dir,
        commitment,
        seed,
        keypair,
        log,
        artifact,
        artifact_hash,
        log_digest,
    })
}

/// Consumer side of publication: log lookup plus signature check, yielding
/// the commitment the consumer will trust for proof verification.
fn consumer_publication(d: &Deployment, t: &mut Transcript) -> Result<Commitment, HarnessError> {
    let (ok, published) = client::consumer_check_publication(
        &d.artifact,
        &d.log_digest,
        &d.log,
        &d.keypair.public_key(),
    );
    match published {
        Some(commitment) if ok => {
            t.record(
                "consumer",
                "check-publication",
                format!("log and signature verified; commitment {}", short(&commitment.root)),
            );
            Ok(commitment)
        }
        _ => Err(HarnessError::Protocol(
            "honest publication failed the consumer check".into(),
        )),
    }
}

/// The full honest protocol, one verdict per queried CVE.
pub fn run_happy_path(scenario: &Scenario) -> Result<Transcript, HarnessError> {
    if scenario.adversary != Adversary::None {
        return Err(HarnessError::Fixture(format!(
            "scenario {:?} sets an adversary; use run_adversarial",
            scenario.name
        )));
    }
    let mut t = Transcript::new(&scenario.name);
    let d = deploy(scenario, &mut t)?;
    let published = consumer_publication(&d, &mut t)?;

    for cve in &scenario.cves {
        let proofs = d.operator.query_vulnerability(&published, cve, &d.db)?;
        t.record(
            "operator",
            "generate-proofs",
            format!("{cve}: {} proofs", proofs.len()),
        );
        let verdict = client::consumer_verify_proofs(&published, cve, &proofs, &d.db)?;
        t.record(
            "consumer",
            "verify-proofs",
            format!("{cve}: {:?} — {}", verdict.kind, verdict.detail),
        );
        t.verdicts.insert(cve.clone(), verdict.kind);
    }
    Ok(t)
}

/// Runs one adversarial variant to its detection point. Errors if the
/// attack is *not* caught — a passing adversarial run always ends with
/// `detection` set.
pub fn run_adversarial(scenario: &Scenario) -> Result<Transcript, HarnessError> {
    let mut t = Transcript::new(&scenario.name);
    match scenario.adversary {
        Adversary::None => Err(HarnessError::Fixture(format!(
            "scenario {:?} has no adversary; use run_happy_path",
            scenario.name
        ))),
        Adversary::TamperOperator => run_tamper_operator(scenario, t),
        Adversary::ForgeProofConsumer => run_forge_proof(scenario, t),
        Adversary::RetroactiveHide => run_retroactive_hide(scenario, t),
        Adversary::Repudiate => run_repudiate(scenario, t),
        Adversary::SplitView => {
            let d = deploy(scenario, &mut t)?;
            run_split_view(d, t)
        }
    }
}

/// The operator silently drops a component before committing; the
/// supplier's recomputation over the real SBOM must not match.
fn run_tamper_operator(
    scenario: &Scenario,
    mut t: Transcript,
) -> Result<Transcript, HarnessError> {
    let sbom_bytes = read_fixture(&scenario.sbom)?;
    let report = sbom::parse_cyclonedx(&sbom_bytes)?;
    let mut components = report.document.components.clone();
    if components.pop().is_none() {
        return Err(HarnessError::Fixture(
            "tamper-operator needs a non-empty SBOM".into(),
        ));
    }
    let seed = Seed::generate();
    let (claimed, _) = zks::commit(sbom::components_to_datastore(&components), seed);
    t.record(
        "operator",
        "commit-sbom",
        format!(
            "commitment {} (tampered: one component dropped)",
            short(&claimed.root)
        ),
    );

    if client::supplier_check_commitment(&sbom_bytes, &seed, &claimed)? {
        return Err(HarnessError::Protocol(
            "tampered commitment passed supplier recomputation".into(),
        ));
    }
    t.record(
        "supplier",
        DETECT_SUPPLIER_CHECK,
        "recomputed root differs — tampering detected, publication refused",
    );
    t.detection = Some(DETECT_SUPPLIER_CHECK.to_string());
    Ok(t)
}

/// Proof claims are mutated in transit; the consumer's verdict must be
/// `Invalid`, never a flipped `Affected`/`NotAffected`.
fn run_forge_proof(scenario: &Scenario, mut t: Transcript) -> Result<Transcript, HarnessError> {
    let d = deploy(scenario, &mut t)?;
    let published = consumer_publication(&d, &mut t)?;
    let cve = scenario
        .cves
        .first()
        .ok_or_else(|| HarnessError::Fixture("forge-proof-consumer needs a CVE".into()))?;

    let mut proofs = d.operator.query_vulnerability(&published, cve, &d.db)?;
    t.record(
        "operator",
        "generate-proofs",
        format!("{cve}: {} proofs", proofs.len()),
    );

    let target = proofs
        .first_mut()
        .ok_or_else(|| HarnessError::Fixture("advisory resolved to no components".into()))?;
    if target.present {
        target.present = false;
        target.value = None;
    } else {
        target.present = true;
        target.value = Some(target.component.canonical());
    }
    t.record(
        "adversary",
        "forge-proof",
        format!("flipped `present` on {}", target.component.canonical()),
    );

    let verdict = client::consumer_verify_proofs(&published, cve, &proofs, &d.db)?;
    if verdict.kind != VerdictKind::Invalid {
        return Err(HarnessError::Protocol(format!(
            "forged proofs produced verdict {:?}",
            verdict.kind
        )));
    }
    t.record(
        "consumer",
        DETECT_CONSUMER_INVALID,
        format!("Invalid — {}", verdict.detail),
    );
    t.verdicts.insert(cve.clone(), VerdictKind::Invalid);
    t.detection = Some(DETECT_CONSUMER_INVALID.to_string());
    Ok(t)
}

/// After publishing honestly, the operator answers from a doctored state
/// with the vulnerable component removed. Its non-inclusion proof cannot
/// verify against the published commitment.
fn run_retroactive_hide(
    scenario: &Scenario,
    mut t: Transcript,
) -> Result<Transcript, HarnessError> {
    let d = deploy(scenario, &mut t)?;
    let published = consumer_publication(&d, &mut t)?;
    let cve = scenario
        .cves
        .first()
        .ok_or_else(|| HarnessError::Fixture("retroactive-hide needs a CVE".into()))?;

    let report = sbom::parse_cyclonedx(&d.sbom_bytes)?;
    let affected = d.db.resolve(cve).map_err(HarnessError::Advisory)?;
    let hidden = affected
        .iter()
        .find(|a| report.document.components.contains(a))
        .ok_or_else(|| {
            HarnessError::Fixture(format!(
                "retroactive-hide needs {cve} to name a component the SBOM contains"
            ))
        })?;

    let doctored: Vec<ComponentId> = report
        .document
        .components
        .iter()
        .filter(|c| *c != hidden)
        .cloned()
        .collect();
    let (_, doctored_state) =
        zks::commit(sbom::components_to_datastore(&doctored), d.seed);
    t.record(
        "operator",
        "doctor-state",
        format!("answers queries as if {} were absent", hidden.canonical()),
    );

    let label = crypto::hash(hidden.canonical().as_bytes());
    let (proof, value) = zks::query(&doctored_state, &label);
    if value.is_some() {
        return Err(HarnessError::Protocol(
            "doctored state still contains the hidden component".into(),
        ));
    }
    if zks::verify(&published, &label, None, &proof) {
        return Err(HarnessError::Protocol(
            "doctored non-inclusion proof verified against the published commitment".into(),
        ));
    }
    t.record(
        "consumer",
        DETECT_ZKS_VERIFY,
        format!(
            "non-inclusion proof for {} rejected against commitment {}",
            hidden.canonical(),
            short(&published.root)
        ),
    );
    t.detection = Some(DETECT_ZKS_VERIFY.to_string());

    // Packaged as a full response, the doctored answers can only yield
    // Invalid — never a false NotAffected.
    let forged = client::build_component_proofs(&doctored_state, affected);
    let verdict = client::consumer_verify_proofs(&published, cve, &forged, &d.db)?;
    if verdict.kind != VerdictKind::Invalid {
        return Err(HarnessError::Protocol(format!(
            "doctored response produced verdict {:?}",
            verdict.kind
        )));
    }
    t.verdicts.insert(cve.clone(), VerdictKind::Invalid);
    Ok(t)
}

/// The supplier denies having published. The logged entry's signature over
/// the artifact-commitment binding, under the supplier's own key, refutes
/// the denial.
fn run_repudiate(scenario: &Scenario, mut t: Transcript) -> Result<Transcript, HarnessError> {
    let d = deploy(scenario, &mut t)?;
    t.record("supplier", "repudiate", "denies having published a commitment");

    let (found, entry, proof) = d.log.lookup(&d.artifact_hash);
    if !tlog::verify_lookup(&d.log.digest(), &d.artifact_hash, found, entry, &proof) {
        return Err(HarnessError::Protocol("log lookup failed to verify".into()));
    }
    let entry = entry.ok_or_else(|| {
        HarnessError::Protocol("published artifact missing from the log".into())
    })?;

    let message = client::binding_message(&entry.artifact_hash, &entry.commitment);
    let signed = entry
        .supplier_public_key
        .verify(&message, &entry.signature);
    if !signed || entry.supplier_public_key != d.keypair.public_key() {
        return Err(HarnessError::Protocol(
            "logged signature does not bind the supplier".into(),
        ));
    }
    t.record(
        "auditor",
        DETECT_NON_REPUDIATION,
        "logged signature verifies under the supplier's key — denial refuted",
    );
    t.detection = Some(DETECT_NON_REPUDIATION.to_string());
    Ok(t)
}

/// The supplier tries to publish a second, different commitment for the
/// same artifact; the log's one-commitment-per-artifact rule rejects it.
fn run_split_view(mut d: Deployment, mut t: Transcript) -> Result<Transcript, HarnessError> {
    let report = sbom::parse_cyclonedx(&d.sbom_bytes)?;
    let mut components = report.document.components.clone();
    components.pop();
    let (second, _) = zks::commit(sbom::components_to_datastore(&components), Seed::generate());
    t.record(
        "supplier",
        "publish",
        format!(
            "attempts second commitment {} for artifact {}",
            short(&second.root),
            short(&d.artifact_hash)
        ),
    );

    match client::supplier_publish(&d.artifact, &second, &d.keypair, &mut d.log) {
        Err(TlogError::DuplicateArtifact(_)) => {
            t.record(
                "log",
                DETECT_DUPLICATE_ARTIFACT,
                "second commitment for the artifact rejected",
            );
            t.detection = Some(DETECT_DUPLICATE_ARTIFACT.to_string());
            // The original binding is untouched.
            let (found, entry, _) = d.log.lookup(&d.artifact_hash);
            let intact = found && entry.map(|e| e.commitment == d.commitment).unwrap_or(false);
            if !intact {
                return Err(HarnessError::Protocol(
                    "original log entry changed during split-view attempt".into(),
                ));
            }
            Ok(t)
        }
        Err(other) => Err(other.into()),
        Ok(_) => Err(HarnessError::Protocol(
            "second commitment for the same artifact was accepted".into(),
        )),
    }
}
