//! Supplier- and consumer-side protocol steps.
//!
//! The supplier checks the operator's work (recommit and compare), then
//! publishes the commitment to the transparency log under a signature. The
//! consumer checks the publication (log inclusion plus signature), then
//! verifies per-component proofs against the published commitment and
//! renders a verdict.
//!
//! The signature covers the binding message
//! `0x03 ‖ H(A) ‖ root ‖ alg-id-length ‖ alg-id` rather than the commitment
//! alone, so a valid signature cannot be re-attached to a log entry for a
//! different artifact.
//!
//! Verdicts are strict. `Affected` and `NotAffected` are only rendered when
//! every proof in the response individually passes coverage, relevance, and
//! cryptographic checks; any single failure — a missing or extra component,
//! a value that is neither the affected id nor absent, a path that does not
//! fold to the commitment — yields `Invalid`. A response that fails
//! verification must never be mistaken for a reassuring answer.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::advisory::{AdvisoryDb, AdvisoryError};
use crate::crypto::{self, Keypair, PublicKey, TAG_BINDING};
use crate::model::{ComponentId, Digest, Verdict, VerdictKind};
use crate::sbom::{self, SbomError};
use crate::tlog::{self, LogState, TlogError};
use crate::zks::{self, Commitment, ProofKind, SecretState, Seed, ZksProof};

/// Serialized payload the supplier signs:
/// `0x03 ‖ artifact_hash ‖ commitment root ‖ alg-id length (u8) ‖ alg-id`.
pub fn binding_message(artifact_hash: &Digest, commitment: &Commitment) -> Vec<u8> {
    let alg = commitment.hash_alg.as_bytes();
    assert!(alg.len() <= u8::MAX as usize, "hash algorithm id too long");
    let mut out = Vec::with_capacity(1 + 32 + 32 + 1 + alg.len());
    out.push(TAG_BINDING);
    out.extend_from_slice(artifact_hash.as_ref());
    out.extend_from_slice(commitment.root.as_ref());
    out.push(alg.len() as u8);
    out.extend_from_slice(alg);
    out
}

/// One per-component answer from the operator: the component asked about,
/// whether it is present, the committed value when it is, and the proof in
/// wire hex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentProof {
    pub component: ComponentId,
    pub present: bool,
    pub value: Option<String>,
    #[serde(rename = "proof")]
    pub proof_hex: String,
}

/// The operator's full response body for one CVE query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofResponse {
    pub cve: String,
    pub proofs: Vec<ComponentProof>,
}

/// The operator's proof-generation step: one [`ComponentProof`] per
/// affected component, in the given order. Shared here so the HTTP service
/// and in-process harnesses answer queries identically.
pub fn build_component_proofs(
    state: &SecretState,
    affected: &[ComponentId],
) -> Vec<ComponentProof> {
    affected
        .iter()
        .map(|component| {
            let label = crypto::hash(component.canonical().as_bytes());
            let (proof, value) = zks::query(state, &label);
            ComponentProof {
                component: component.clone(),
                present: value.is_some(),
                value,
                proof_hex: proof.to_hex(),
            }
        })
        .collect()
}

/// Supplier check: recommit the SBOM under the returned seed and compare
/// against the operator's claimed commitment. A match guarantees the
/// operator committed to exactly this document's component set.
pub fn supplier_check_commitment(
    sbom_bytes: &[u8],
    seed: &Seed,
    claimed: &Commitment,
) -> Result<bool, SbomError> {
    let report = sbom::parse_cyclonedx(sbom_bytes)?;
    let datastore = sbom::to_datastore(&report.document);
    let (recomputed, _) = zks::commit(datastore, *seed);
    Ok(recomputed == *claimed)
}

/// Supplier publication: sign the binding message and append
/// `(H(A), commitment, σ, pk)` to the log. Returns the artifact hash and
/// the log digest after the append.
pub fn supplier_publish(
    artifact_bytes: &[u8],
    commitment: &Commitment,
    keypair: &Keypair,
    log: &mut LogState,
) -> Result<(Digest, Digest), TlogError> {
    let artifact_hash = crypto::hash(artifact_bytes);
    let signature = keypair.sign(&binding_message(&artifact_hash, commitment));
    let digest = log.append(artifact_hash, commitment.clone(), signature, keypair.public_key())?;
    Ok((artifact_hash, digest))
}

/// Consumer publication check: look the artifact up in the log, verify the
/// lookup proof against the trusted digest, and verify the supplier's
/// signature over the binding message. Any failure yields `(false, None)`.
pub fn consumer_check_publication(
    artifact_bytes: &[u8],
    trusted_digest: &Digest,
    log: &LogState,
    supplier_pk: &PublicKey,
) -> (bool, Option<Commitment>) {
    let artifact_hash = crypto::hash(artifact_bytes);
    let (found, entry, proof) = log.lookup(&artifact_hash);
    if !tlog::verify_lookup(trusted_digest, &artifact_hash, found, entry, &proof) {
        return (false, None);
    }
    let Some(entry) = entry else {
        return (false, None);
    };
    let message = binding_message(&artifact_hash, &entry.commitment);
    if !supplier_pk.verify(&message, &entry.signature) {
        return (false, None);
    }
    (true, Some(entry.commitment.clone()))
}

/// Consumer proof verification: resolve the CVE independently, require the
/// response to cover exactly the affected set, and verify every proof
/// against the commitment.
pub fn consumer_verify_proofs(
    commitment: &Commitment,
    cve_id: &str,
    proofs: &[ComponentProof],
    db: &AdvisoryDb,
) -> Result<Verdict, AdvisoryError> {
    let affected = db.resolve(cve_id)?;
    let wanted: BTreeSet<String> = affected.iter().map(|c| c.canonical()).collect();

    let mut covered = BTreeSet::new();
    for p in proofs {
        let canonical = p.component.canonical();
        if !wanted.contains(&canonical) {
            return Ok(Verdict::new(
                VerdictKind::Invalid,
                format!("proof for {canonical} which {cve_id} does not affect"),
            ));
        }
        if !covered.insert(canonical.clone()) {
            return Ok(Verdict::new(
                VerdictKind::Invalid,
                format!("duplicate proof for {canonical}"),
            ));
        }
    }
    if covered.len() != wanted.len() {
        let missing: Vec<&String> = wanted.difference(&covered).collect();
        return Ok(Verdict::new(
            VerdictKind::Invalid,
            format!("no proof for affected {missing:?}"),
        ));
    }

    let mut any_inclusion = false;
    for p in proofs {
        let canonical = p.component.canonical();
        let label = crypto::hash(canonical.as_bytes());
        let Ok(proof) = ZksProof::from_hex(&p.proof_hex) else {
            return Ok(Verdict::new(
                VerdictKind::Invalid,
                format!("undecodable proof for {canonical}"),
            ));
        };
        if proof.label != label {
            return Ok(Verdict::new(
                VerdictKind::Invalid,
                format!("proof label does not match {canonical}"),
            ));
        }
        let ok = match (p.present, p.value.as_deref(), proof.kind) {
            (true, Some(v), ProofKind::Inclusion) => {
                // Relevance: the revealed value must be the affected id
                // itself, nothing else.
                if v != canonical {
                    return Ok(Verdict::new(
                        VerdictKind::Invalid,
                        format!("proof for {canonical} reveals unrelated value {v:?}"),
                    ));
                }
                any_inclusion = true;
                zks::verify(commitment, &label, Some(v), &proof)
            }
            (false, None, ProofKind::NonInclusion) => {
                zks::verify(commitment, &label, None, &proof)
            }
            _ => false,
        };
        if !ok {
            return Ok(Verdict::new(
                VerdictKind::Invalid,
                format!("proof for {canonical} failed verification"),
            ));
        }
    }

    if any_inclusion {
        Ok(Verdict::new(
            VerdictKind::Affected,
            "at least one affected component proven present",
        ))
    } else {
        Ok(Verdict::new(
            VerdictKind::NotAffected,
            format!("all {} affected components proven absent", proofs.len()),
        ))
    }
}
