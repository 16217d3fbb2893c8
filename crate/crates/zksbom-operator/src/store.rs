//! Flat-file persistence for commitment records: one write-once text file
//! per commitment, named `<commitment-hex>.zks`.
//!
//! ```text
//! ZKSBOM/1
//! hash=blake2b-256
//! seed=<64 hex>
//! <canonical component id>      (ascending label order, one per line)
//! ...
//! ```
//!
//! The format carries exactly what regenerates the commitment — seed and
//! component list — so loading can recompute the root and compare it to the
//! filename. A mismatch means the file no longer describes the commitment
//! it is stored under.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use zksbom_core::crypto::HASH_ALG_ID;
use zksbom_core::model::{ComponentId, Datastore, Digest};
use zksbom_core::sbom::components_to_datastore;
use zksbom_core::zks::{self, Commitment, SecretState, Seed};

use crate::OperatorError;

/// Everything the operator keeps per upload. `created_at` is provenance
/// only — it is restored from file metadata on load and is not part of the
/// serialized format, which stays byte-identical across re-serializations.
#[derive(Debug, Clone)]
pub struct CommitmentRecord {
    pub commitment: Commitment,
    pub seed: Seed,
    pub datastore: Datastore,
    pub created_at: SystemTime,
}

pub fn record_path(dir: &Path, root: &Digest) -> PathBuf {
    dir.join(format!("{}.zks", root.to_hex()))
}

/// The canonical byte rendering of a record.
pub fn render_record(record: &CommitmentRecord) -> String {
    let mut out = String::new();
    out.push_str("ZKSBOM/1\n");
    out.push_str("hash=");
    out.push_str(&record.commitment.hash_alg);
    out.push('\n');
    out.push_str("seed=");
    out.push_str(&record.seed.to_hex());
    out.push('\n');
    for entry in record.datastore.iter() {
        out.push_str(&entry.value);
        out.push('\n');
    }
    out
}

/// Writes the record file atomically (temp file + rename). Existing files
/// are left untouched: records are write-once and keyed by their content's
/// commitment, so an existing file already holds the same bytes.
pub fn write_record(dir: &Path, record: &CommitmentRecord) -> Result<PathBuf, OperatorError> {
    let path = record_path(dir, &record.commitment.root);
    if path.exists() {
        return Ok(path);
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(render_record(record).as_bytes())?;
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

/// Loads and integrity-checks the record for `root`. Returns the record
/// together with the rebuilt prover state so callers don't recommit.
pub fn load_record(dir: &Path, root: &Digest) -> Result<(CommitmentRecord, SecretState), OperatorError> {
    let path = record_path(dir, root);
    let text = match fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(OperatorError::UnknownCommitment(root.to_hex()));
        }
        Err(e) => return Err(e.into()),
    };
    let corrupt = |detail: String| OperatorError::CorruptRecord {
        path: path.clone(),
        detail,
    };

    let mut lines = text.lines();
    match lines.next() {
        Some("ZKSBOM/1") => {}
        other => return Err(corrupt(format!("bad magic line {other:?}"))),
    }
    match lines.next().and_then(|l| l.strip_prefix("hash=")) {
        Some(HASH_ALG_ID) => {}
        other => return Err(corrupt(format!("unsupported hash line {other:?}"))),
    }
    let seed = lines
        .next()
        .and_then(|l| l.strip_prefix("seed="))
        .and_then(Seed::from_hex)
        .ok_or_else(|| corrupt("missing or malformed seed line".into()))?;

    let mut components = Vec::new();
    for line in lines {
        let id = ComponentId::parse(line)
            .map_err(|e| corrupt(format!("bad component line {line:?}: {e}")))?;
        components.push(id);
    }

    let datastore = components_to_datastore(&components);
    let (recomputed, state) = zks::commit(datastore.clone(), seed);
    if recomputed.root != *root {
        return Err(corrupt(format!(
            "recomputed commitment {} does not match filename",
            recomputed.root.to_hex()
        )));
    }

    let created_at = fs::metadata(&path)
        .and_then(|m| m.modified())
        .unwrap_or(SystemTime::UNIX_EPOCH);
    let record = CommitmentRecord {
        commitment: recomputed,
        seed,
        datastore,
        created_at,
    };
    Ok((record, state))
}
