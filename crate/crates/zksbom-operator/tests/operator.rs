//! End-to-end operator behavior: upload → record → query over the library
//! API, and the same flows over a real HTTP socket.

use std::collections::BTreeSet;
use std::sync::Arc;

use zksbom_core::advisory::{AdvisoryDb, AdvisoryError};
use zksbom_core::client::ProofResponse;
use zksbom_core::crypto;
use zksbom_core::model::{Datastore, Digest};
use zksbom_core::zks::{self, Commitment, ProofKind, Seed, ZksProof};
use zksbom_operator::http::{router, AppState};
use zksbom_operator::{Operator, OperatorError};

const SBOM: &str = r#"{
  "bomFormat": "CycloneDX",
  "specVersion": "1.5",
  "components": [
    { "purl": "pkg:npm/alpha@1.0.0" },
    { "purl": "pkg:npm/beta@2.0.0" },
    { "purl": "pkg:cargo/gamma@0.3.1" }
  ]
}"#;

const EMPTY_SBOM: &str = r#"{
  "bomFormat": "CycloneDX",
  "specVersion": "1.5",
  "components": []
}"#;

const ADVISORIES: &str = r#"[
  { "id": "CVE-2099-0001", "affected": ["beta@2.0.0@NPM", "beta@2.0.1@NPM"] },
  { "id": "CVE-2099-0002", "affected": ["ghost@9.9.9@NPM"] }
]"#;

fn advisories() -> AdvisoryDb {
    AdvisoryDb::from_bytes(ADVISORIES.as_bytes(), "inline").unwrap()
}

#[test]
fn upload_commitment_matches_supplier_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let operator = Operator::open(dir.path()).unwrap();
    let (commitment, seed) = operator.upload_sbom(SBOM.as_bytes()).unwrap();
    assert!(
        zksbom_core::client::supplier_check_commitment(SBOM.as_bytes(), &seed, &commitment)
            .unwrap()
    );
}

#[test]
fn empty_sbom_commits_to_the_empty_set_root() {
    let dir = tempfile::tempdir().unwrap();
    let operator = Operator::open(dir.path()).unwrap();
    let (commitment, _) = operator.upload_sbom(EMPTY_SBOM.as_bytes()).unwrap();
    let (expected, _) = zks::commit(Datastore::default(), Seed::from_bytes([99; 32]));
    assert_eq!(commitment.root, expected.root, "empty root is seed-independent");
}

#[test]
fn repeated_uploads_draw_fresh_seeds_and_commitments() {
    let dir = tempfile::tempdir().unwrap();
    let operator = Operator::open(dir.path()).unwrap();
    let mut commitments = BTreeSet::new();
    let mut seeds = BTreeSet::new();
    for _ in 0..10 {
        let (commitment, seed) = operator.upload_sbom(SBOM.as_bytes()).unwrap();
        commitments.insert(commitment.root.to_hex());
        seeds.insert(seed.to_hex());
    }
    assert_eq!(commitments.len(), 10);
    assert_eq!(seeds.len(), 10);
}

#[test]
fn malformed_document_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let operator = Operator::open(dir.path()).unwrap();
    let err = operator.upload_sbom(b"{ not json").unwrap_err();
    assert!(matches!(err, OperatorError::Malformed(_)));
}

#[test]
fn query_response_covers_exactly_the_advisory_set_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let operator = Operator::open(dir.path()).unwrap();
    let (commitment, _) = operator.upload_sbom(SBOM.as_bytes()).unwrap();
    let db = advisories();

    let proofs = operator
        .query_vulnerability(&commitment, "CVE-2099-0001", &db)
        .unwrap();
    let returned: Vec<String> = proofs.iter().map(|p| p.component.canonical()).collect();
    assert_eq!(returned, ["beta@2.0.0@NPM", "beta@2.0.1@NPM"]);

    for proof in &proofs {
        let parsed = ZksProof::from_hex(&proof.proof_hex).unwrap();
        let label = crypto::hash(proof.component.canonical().as_bytes());
        assert!(zks::verify(&commitment, &label, proof.value.as_deref(), &parsed));
        assert_eq!(proof.present, parsed.kind == ProofKind::Inclusion);
        assert_eq!(proof.present, proof.value.is_some());
    }
    assert!(proofs[0].present, "beta@2.0.0 is in the SBOM");
    assert!(!proofs[1].present, "beta@2.0.1 is not");
}

#[test]
fn unknown_commitment_and_unknown_cve_are_distinct_errors() {
    let dir = tempfile::tempdir().unwrap();
    let operator = Operator::open(dir.path()).unwrap();
    let db = advisories();

    let absent = Commitment::new(Digest::from_bytes([0xAB; 32]));
    let err = operator
        .query_vulnerability(&absent, "CVE-2099-0001", &db)
        .unwrap_err();
    assert!(matches!(err, OperatorError::UnknownCommitment(_)));

    let (commitment, _) = operator.upload_sbom(SBOM.as_bytes()).unwrap();
    let err = operator
        .query_vulnerability(&commitment, "CVE-0000-0000", &db)
        .unwrap_err();
    assert!(matches!(
        err,
        OperatorError::Advisory(AdvisoryError::UnknownCve(_))
    ));
}

#[test]
fn queries_survive_an_operator_restart() {
    let dir = tempfile::tempdir().unwrap();
    let commitment = {
        let operator = Operator::open(dir.path()).unwrap();
        operator.upload_sbom(SBOM.as_bytes()).unwrap().0
    };

    // A fresh operator over the same directory reloads the record from
    // disk (integrity-checked) and answers identically.
    let operator = Operator::open(dir.path()).unwrap();
    let proofs = operator
        .query_vulnerability(&commitment, "CVE-2099-0001", &advisories())
        .unwrap();
    assert_eq!(proofs.len(), 2);
    let record = operator.load_record(&commitment.root).unwrap();
    assert_eq!(record.datastore.len(), 3);
}

#[tokio::test]
async fn http_round_trip_upload_then_proof() {
    let dir = tempfile::tempdir().unwrap();
    let state = AppState {
        operator: Arc::new(Operator::open(dir.path()).unwrap()),
        advisories: Arc::new(advisories()),
    };
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let app = router(state);
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });

    let client = reqwest::Client::new();

    let resp = client
        .post(format!("{base}/api/v1/sbom"))
        .body(SBOM)
        .send()
        .await
        .unwrap();
    assert_eq!(resp.status(), 200);
    let body: serde_json::Value = resp.json().await.unwrap();
    let commitment_hex = body["commitment"].as_str().unwrap().to_string();
    let seed_hex = body["seed"].as_str().unwrap();
    assert_eq!(commitment_hex.len(), 64);
    assert_eq!(seed_hex.len(), 64);

    // The returned pair passes the supplier's recomputation check.
    let commitment = Commitment::new(Digest::from_hex(&commitment_hex).unwrap());
    let seed = Seed::from_hex(seed_hex).unwrap();
    assert!(
        zksbom_core::client::supplier_check_commitment(SBOM.as_bytes(), &seed, &commitment)
            .unwrap()
    );

    let resp = client
        .get(format!(
            "{base}/api/v1/proof?commitment={commitment_hex}&cve=CVE-2099-0001"
        ))
        .send()
        .await
        .unwrap();
    assert_eq!(resp.status(), 200);
    let response: ProofResponse = resp.json().await.unwrap();
    assert_eq!(response.cve, "CVE-2099-0001");
    assert_eq!(response.proofs.len(), 2);
    for proof in &response.proofs {
        let parsed = ZksProof::from_hex(&proof.proof_hex).unwrap();
        let label = crypto::hash(proof.component.canonical().as_bytes());
        assert!(zks::verify(&commitment, &label, proof.value.as_deref(), &parsed));
    }

    // The wire shape: "proof" key, explicit null value for absences.
    let raw: serde_json::Value = client
        .get(format!(
            "{base}/api/v1/proof?commitment={commitment_hex}&cve=CVE-2099-0001"
        ))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    assert!(raw["proofs"][0]["proof"].is_string());
    assert!(raw["proofs"][1]["value"].is_null());
}

#[tokio::test]
async fn http_error_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let state = AppState {
        operator: Arc::new(Operator::open(dir.path()).unwrap()),
        advisories: Arc::new(advisories()),
    };
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let app = router(state);
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });

    let client = reqwest::Client::new();

    let resp = client
        .post(format!("{base}/api/v1/sbom"))
        .body("not cyclonedx")
        .send()
        .await
        .unwrap();
    assert_eq!(resp.status(), 400);

    let resp = client
        .get(format!("{base}/api/v1/proof?commitment=zzz&cve=CVE-2099-0001"))
        .send()
        .await
        .unwrap();
    assert_eq!(resp.status(), 400);

    let unknown = "ab".repeat(32);
    let resp = client
        .get(format!(
            "{base}/api/v1/proof?commitment={unknown}&cve=CVE-2099-0001"
        ))
        .send()
        .await
        .unwrap();
    assert_eq!(resp.status(), 404);

    let resp = client
        .get(format!("{base}/api/v1/proof?commitment={unknown}&cve="))
        .send()
        .await
        .unwrap();
    assert_eq!(resp.status(), 404, "empty cve id is simply unknown");

    let resp = client
        .get(format!("{base}/api/v1/proof?cve=CVE-2099-0001"))
        .send()
        .await
        .unwrap();
    assert_eq!(resp.status(), 400, "missing commitment parameter");
}
