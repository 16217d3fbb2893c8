//! Append-only transparency log: a verifiable map from artifact hashes to
//! signed commitments.
//!
//! The map reuses the sparse-Merkle machinery of the commitment tree with
//! zero salts — log contents are public, so there is nothing to hide, only
//! to bind. Key `H(A)` maps to `H(entry encoding)`; the map root is the log
//! digest. Every append pushes the new root onto a digest history, and
//! because each historical digest binds the full map contents at its time,
//! an auditor can check the append-only property by recomputing a prefix
//! root: if any entry visible at an old digest were later rewritten, no
//! prefix of the current entries would reproduce that digest.
//!
//! At most one entry may ever exist per artifact hash. This is the
//! split-view defense: with a single global mapping, two consumers looking
//! up the same artifact cannot be shown different commitments.
//!
//! Appends are rejected unless the supplier's signature verifies over the
//! binding message, so the log never holds an entry its claimed publisher
//! could disown.
//!
//! Entry encoding (bit-exact, hashed and persisted):
//!
//! ```text
//! artifact_hash        32 bytes
//! commitment root      32 bytes
//! alg-id length ‖ id   u8 ‖ bytes
//! signature length ‖ σ u16 BE ‖ bytes
//! pubkey length ‖ pk   u16 BE ‖ bytes
//! ```
//!
//! The sequence number is the entry's line index and is not part of the
//! encoding. On disk a log is `entries.log` (one hex entry per line) plus
//! `digests.log` (one hex digest per append).

use std::collections::HashMap;
use std::path::Path;

use thiserror::Error;

use crate::client::binding_message;
use crate::crypto::{self, PublicKey};
use crate::model::Digest;
use crate::zks::{
    compress_siblings, empty_digest, expand_siblings, fold_siblings, leaf_digest, Commitment,
    SparseTree, DEPTH,
};

/// One published (artifact → commitment) binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub artifact_hash: Digest,
    pub commitment: Commitment,
    pub signature: Vec<u8>,
    pub supplier_public_key: PublicKey,
    pub sequence: u64,
}

/// A lookup proof: the map authentication path for one artifact hash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapProof {
    pub sibling_bitmap: [u8; 32],
    pub siblings: Vec<Digest>,
}

/// Errors from log operations.
#[derive(Debug, Error)]
pub enum TlogError {
    #[error("artifact {0} already has a published commitment")]
    DuplicateArtifact(String),
    #[error("signature does not verify for artifact {0}")]
    InvalidSignature(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed log data: {0}")]
    MalformedLog(String),
}

/// The log: ordered entries, their digest history, and the current map
/// tree. Appends are single-writer (`&mut self`); lookups are read-only.
pub struct LogState {
    entries: Vec<LogEntry>,
    index: HashMap<Digest, usize>,
    digest_history: Vec<Digest>,
    /// `(artifact_hash, map leaf digest)`, sorted by artifact hash.
    leaves: Vec<(Digest, Digest)>,
    tree: SparseTree,
}

impl Default for LogState {
    fn default() -> Self {
        Self::new()
    }
}

fn map_leaf(artifact_hash: &Digest, value_hash: &Digest) -> Digest {
    leaf_digest(&Digest::ZERO, artifact_hash, value_hash)
}

fn entry_leaf(entry: &LogEntry) -> Digest {
    map_leaf(&entry.artifact_hash, &crypto::hash(&encode_entry(entry)))
}

/// Map root over an arbitrary entry slice; later entries win on duplicate
/// artifact hashes (which an honest log never contains).
fn map_root(entries: &[LogEntry]) -> Digest {
    let leaves: std::collections::BTreeMap<Digest, Digest> = entries
        .iter()
        .map(|e| (e.artifact_hash, entry_leaf(e)))
        .collect();
    let leaves: Vec<(Digest, Digest)> = leaves.into_iter().collect();
    SparseTree::build(&leaves).root_digest()
}

impl LogState {
    /// An empty log; its digest is the empty-map root.
    pub fn new() -> LogState {
        LogState {
            entries: Vec::new(),
            index: HashMap::new(),
            digest_history: Vec::new(),
            leaves: Vec::new(),
            tree: SparseTree::build(&[]),
        }
    }

    /// Reassembles a state from parts without validation. Auditors receive
    /// claimed states from untrusted parties; whether the parts are
    /// consistent is exactly what [`audit_append_only`] and
    /// [`verify_lookup`] decide, so this constructor must not refuse
    /// inconsistent input.
    pub fn from_parts(entries: Vec<LogEntry>, digest_history: Vec<Digest>) -> LogState {
        let leaves: std::collections::BTreeMap<Digest, Digest> = entries
            .iter()
            .map(|e| (e.artifact_hash, entry_leaf(e)))
            .collect();
        let leaves: Vec<(Digest, Digest)> = leaves.into_iter().collect();
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.artifact_hash, i))
            .collect();
        let tree = SparseTree::build(&leaves);
        LogState {
            entries,
            index,
            digest_history,
            leaves,
            tree,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LogEntry] {
        &self.entries
    }

    pub fn digest_history(&self) -> &[Digest] {
        &self.digest_history
    }

    /// Current log digest (map root).
    pub fn digest(&self) -> Digest {
        self.tree.root_digest()
    }

    /// Appends one binding after checking the signature and the
    /// one-commitment-per-artifact rule. Returns the new log digest.
    pub fn append(
        &mut self,
        artifact_hash: Digest,
        commitment: Commitment,
        signature: Vec<u8>,
        supplier_public_key: PublicKey,
    ) -> Result<Digest, TlogError> {
        let message = binding_message(&artifact_hash, &commitment);
        if !supplier_public_key.verify(&message, &signature) {
            return Err(TlogError::InvalidSignature(artifact_hash.to_hex()));
        }
        if self.index.contains_key(&artifact_hash) {
            return Err(TlogError::DuplicateArtifact(artifact_hash.to_hex()));
        }
        let entry = LogEntry {
            artifact_hash,
            commitment,
            signature,
            supplier_public_key,
            sequence: self.entries.len() as u64,
        };
        let leaf = entry_leaf(&entry);
        let pos = self.leaves.partition_point(|(l, _)| *l < artifact_hash);
        self.leaves.insert(pos, (artifact_hash, leaf));
        self.index.insert(artifact_hash, self.entries.len());
        self.entries.push(entry);
        self.tree = SparseTree::build(&self.leaves);
        let digest = self.tree.root_digest();
        self.digest_history.push(digest);
        Ok(digest)
    }

    /// Looks up an artifact hash against the latest digest: the entry and
    /// an inclusion path, or a non-inclusion path for absent keys.
    pub fn lookup(&self, artifact_hash: &Digest) -> (bool, Option<&LogEntry>, MapProof) {
        let (sibling_bitmap, siblings) = compress_siblings(&self.tree.siblings(artifact_hash));
        let proof = MapProof {
            sibling_bitmap,
            siblings,
        };
        match self.index.get(artifact_hash) {
            Some(&i) => (true, Some(&self.entries[i]), proof),
            None => (false, None, proof),
        }
    }

    /// Persists as `entries.log` + `digests.log` under `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<(), TlogError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let entries: String = self
            .entries
            .iter()
            .map(|e| hex::encode(encode_entry(e)) + "\n")
            .collect();
        let digests: String = self
            .digest_history
            .iter()
            .map(|d| d.to_hex() + "\n")
            .collect();
        std::fs::write(dir.join("entries.log"), entries)?;
        std::fs::write(dir.join("digests.log"), digests)?;
        Ok(())
    }

    /// Loads a persisted log. Only structural damage is an error here;
    /// semantic tampering is for [`verify_lookup`] and
    /// [`audit_append_only`] to catch against a trusted digest.
    pub fn load(dir: impl AsRef<Path>) -> Result<LogState, TlogError> {
        let dir = dir.as_ref();
        let entries_text = std::fs::read_to_string(dir.join("entries.log"))?;
        let digests_text = std::fs::read_to_string(dir.join("digests.log"))?;

        let mut entries = Vec::new();
        for (i, line) in entries_text.lines().enumerate() {
            let bytes = hex::decode(line)
                .map_err(|_| TlogError::MalformedLog(format!("entry line {i}: bad hex")))?;
            entries.push(decode_entry(&bytes, i as u64).map_err(|e| {
                TlogError::MalformedLog(format!("entry line {i}: {e}"))
            })?);
        }
        let mut digest_history = Vec::new();
        for (i, line) in digests_text.lines().enumerate() {
            digest_history.push(Digest::from_hex(line).map_err(|_| {
                TlogError::MalformedLog(format!("digest line {i}: bad digest"))
            })?);
        }
        Ok(LogState::from_parts(entries, digest_history))
    }
}

/// Serializes an entry for hashing and persistence.
pub fn encode_entry(entry: &LogEntry) -> Vec<u8> {
    let alg = entry.commitment.hash_alg.as_bytes();
    assert!(alg.len() <= u8::MAX as usize, "hash algorithm id too long");
    assert!(entry.signature.len() <= u16::MAX as usize, "signature too long");
    let pk = entry.supplier_public_key.as_bytes();

    let mut out = Vec::with_capacity(32 + 32 + 1 + alg.len() + 2 + entry.signature.len() + 2 + 32);
    out.extend_from_slice(entry.artifact_hash.as_ref());
    out.extend_from_slice(entry.commitment.root.as_ref());
    out.push(alg.len() as u8);
    out.extend_from_slice(alg);
    out.extend_from_slice(&(entry.signature.len() as u16).to_be_bytes());
    out.extend_from_slice(&entry.signature);
    out.extend_from_slice(&(pk.len() as u16).to_be_bytes());
    out.extend_from_slice(pk);
    out
}

/// Inverse of [`encode_entry`]; the sequence comes from the caller because
/// it is positional, not encoded.
pub fn decode_entry(bytes: &[u8], sequence: u64) -> Result<LogEntry, String> {
    let mut pos = 0usize;
    let mut take = |n: usize| -> Result<&[u8], String> {
        let end = pos.checked_add(n).ok_or("length overflow")?;
        if end > bytes.len() {
            return Err("truncated entry".into());
        }
        let out = &bytes[pos..end];
        pos = end;
        Ok(out)
    };

    let artifact_hash = Digest::from_slice(take(32)?).expect("32 bytes");
    let root = Digest::from_slice(take(32)?).expect("32 bytes");
    let alg_len = take(1)?[0] as usize;
    let hash_alg = std::str::from_utf8(take(alg_len)?)
        .map_err(|_| "hash algorithm id is not UTF-8".to_string())?
        .to_string();
    let sig_len = u16::from_be_bytes(take(2)?.try_into().expect("2 bytes")) as usize;
    let signature = take(sig_len)?.to_vec();
    let pk_len = u16::from_be_bytes(take(2)?.try_into().expect("2 bytes")) as usize;
    let supplier_public_key = PublicKey::from_slice(take(pk_len)?)
        .ok_or_else(|| format!("unsupported public key length {pk_len}"))?;
    if pos != bytes.len() {
        return Err("trailing bytes after entry".into());
    }
    Ok(LogEntry {
        artifact_hash,
        commitment: Commitment { root, hash_alg },
        signature,
        supplier_public_key,
        sequence,
    })
}

/// Verifies a lookup result against a trusted digest. Purely local: needs
/// the digest, never the full state.
pub fn verify_lookup(
    trusted_digest: &Digest,
    artifact_hash: &Digest,
    found: bool,
    entry: Option<&LogEntry>,
    proof: &MapProof,
) -> bool {
    if found != entry.is_some() {
        return false;
    }
    let leaf = match entry {
        Some(e) => {
            if e.artifact_hash != *artifact_hash {
                return false;
            }
            entry_leaf(e)
        }
        None => empty_digest(DEPTH),
    };
    let Some(full) = expand_siblings(&proof.sibling_bitmap, &proof.siblings) else {
        return false;
    };
    fold_siblings(leaf, artifact_hash, &full) == *trusted_digest
}

/// Audits that `new_state` is an append-only extension of the state an
/// auditor trusted under `old_digest`: the history must be self-consistent
/// at its head, contain `old_digest`, and some prefix of the current
/// entries must reproduce it exactly.
pub fn audit_append_only(old_digest: &Digest, new_state: &LogState) -> bool {
    if new_state.digest_history.len() != new_state.entries.len() {
        return false;
    }
    match new_state.digest_history.last() {
        Some(last) if *last != map_root(&new_state.entries) => return false,
        _ => {}
    }
    if *old_digest == empty_digest(0) {
        // Trusting the empty log constrains nothing beyond self-consistency.
        return true;
    }
    let Some(i) = new_state.digest_history.iter().position(|d| d == old_digest) else {
        return false;
    };
    map_root(&new_state.entries[..=i]) == *old_digest
}
