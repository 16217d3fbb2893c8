//! The operator side of the protocol: accept SBOM uploads, commit to their
//! component sets, persist one record per commitment, and answer CVE
//! queries with per-component (non-)inclusion proofs.
//!
//! The operator holds seeds and component lists in the clear — it is
//! trusted not to leak SBOM contents outright. What the design removes is
//! any need for *consumers* to see those contents: they get proofs against
//! the commitment, nothing more. Query responses therefore mention exactly
//! the components named by the advisory, never other datastore members.
//!
//! Records are write-once files keyed by commitment (see [`store`]); a
//! re-upload of the same SBOM draws a fresh seed and produces a new record
//! rather than touching an old one. Authorization of consumers is a
//! deployment concern and intentionally out of scope here.

pub mod http;
pub mod store;

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::SystemTime;

use thiserror::Error;

use zksbom_core::advisory::{AdvisoryDb, AdvisoryError};
use zksbom_core::client::{build_component_proofs, ComponentProof};
use zksbom_core::crypto::HASH_ALG_ID;
use zksbom_core::model::Digest;
use zksbom_core::sbom::{self, SbomError};
use zksbom_core::zks::{self, Commitment, SecretState, Seed};

use store::CommitmentRecord;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Malformed(#[from] SbomError),
    #[error("storage failure: {0}")]
    Storage(#[from] std::io::Error),
    #[error("unknown commitment {0}")]
    UnknownCommitment(String),
    #[error(transparent)]
    Advisory(#[from] AdvisoryError),
    #[error("corrupt record {path}: {detail}")]
    CorruptRecord { path: PathBuf, detail: String },
}

/// A running operator over one record directory. Clone-free sharing via
/// `Arc`; all methods take `&self`.
pub struct Operator {
    store_dir: PathBuf,
    /// Rebuilt prover states, keyed by commitment root. Records are
    /// immutable, so a cached state never goes stale.
    states: RwLock<HashMap<Digest, Arc<SecretState>>>,
    /// Serializes directory-level writes; readers never need it because
    /// record files appear atomically (temp file + rename).
    write_gate: Mutex<()>,
}

impl Operator {
    /// Opens (creating if needed) the record directory.
    pub fn open(store_dir: impl AsRef<Path>) -> std::io::Result<Operator> {
        let store_dir = store_dir.as_ref().to_path_buf();
        std::fs::create_dir_all(&store_dir)?;
        Ok(Operator {
            store_dir,
            states: RwLock::new(HashMap::new()),
            write_gate: Mutex::new(()),
        })
    }

    pub fn store_dir(&self) -> &Path {
        &self.store_dir
    }

    /// Ingests a CycloneDX document, draws a fresh seed, commits, persists
    /// the record, and returns what the supplier needs to check the
    /// commitment and publish it.
    pub fn upload_sbom(&self, document_bytes: &[u8]) -> Result<(Commitment, Seed), OperatorError> {
        let report = sbom::parse_cyclonedx(document_bytes)?;
        let datastore = sbom::to_datastore(&report.document);
        let seed = Seed::generate();
        let (commitment, state) = zks::commit(datastore, seed);

        let record = CommitmentRecord {
            commitment: commitment.clone(),
            seed,
            datastore: state.datastore().clone(),
            created_at: SystemTime::now(),
        };
        {
            let _guard = self.write_gate.lock().expect("write gate poisoned");
            store::write_record(&self.store_dir, &record)?;
        }
        self.states
            .write()
            .expect("state cache poisoned")
            .insert(commitment.root, Arc::new(state));
        Ok((commitment, seed))
    }

    /// Answers a CVE query: one proof per component the advisory names,
    /// in advisory order, and nothing else.
    pub fn query_vulnerability(
        &self,
        commitment: &Commitment,
        cve_id: &str,
        db: &AdvisoryDb,
    ) -> Result<Vec<ComponentProof>, OperatorError> {
        let affected = db.resolve(cve_id)?;
        let state = self.state_for(commitment)?;
        Ok(build_component_proofs(&state, affected))
    }

    /// Persists a record through the operator's write gate.
    pub fn store_record(&self, record: &CommitmentRecord) -> Result<PathBuf, OperatorError> {
        let _guard = self.write_gate.lock().expect("write gate poisoned");
        store::write_record(&self.store_dir, record)
    }

    /// Loads and integrity-checks the record for a commitment root.
    pub fn load_record(&self, root: &Digest) -> Result<CommitmentRecord, OperatorError> {
        let (record, state) = store::load_record(&self.store_dir, root)?;
        self.states
            .write()
            .expect("state cache poisoned")
            .insert(*root, Arc::new(state));
        Ok(record)
    }

    fn state_for(&self, commitment: &Commitment) -> Result<Arc<SecretState>, OperatorError> {
        if commitment.hash_alg != HASH_ALG_ID {
            return Err(OperatorError::UnknownCommitment(format!(
                "{} (hash algorithm {:?} not served here)",
                commitment.root.to_hex(),
                commitment.hash_alg
            )));
        }
        if let Some(state) = self
            .states
            .read()
            .expect("state cache poisoned")
            .get(&commitment.root)
        {
            return Ok(Arc::clone(state));
        }
        let (_, state) = store::load_record(&self.store_dir, &commitment.root)?;
        let state = Arc::new(state);
        self.states
            .write()
            .expect("state cache poisoned")
            .insert(commitment.root, Arc::clone(&state));
        Ok(state)
    }
}
