//! The commitment scheme: `commit`, `query`, `verify` over a salted sparse
//! Merkle tree.
//!
//! `commit` derives a per-label salt from a secret 32-byte seed,
//! `salt(l) = H(0x02 ‖ seed ‖ l)`, and places the leaf
//! `H(0x00 ‖ salt(l) ‖ l ‖ H(v))` at tree position `l`. Vacant positions
//! carry the empty digest, so the same authentication-path machinery proves
//! both inclusion (the salted leaf) and non-inclusion (the empty leaf).
//! `verify` needs only the commitment, the label, the claimed value, and the
//! proof — never the secret state.
//!
//! Salting stops dictionary attacks: without the seed, an observer cannot
//! hash candidate component ids and match them against digests seen in
//! proofs. One caveat is inherent to this construction and deliberate: the
//! count of non-empty siblings on a path weakly correlates with the number
//! of committed entries, so set size is not fully hidden. Callers who care
//! are pointed to the leakage model, which quantifies exactly this kind of
//! exposure.
//!
//! Proof wire format, transported as lowercase hex:
//!
//! ```text
//! 0x01                      version
//! kind                      0x01 inclusion / 0x00 non-inclusion
//! label                     32 bytes
//! salt                      32 bytes        (inclusion only)
//! value length ‖ value      u16 BE ‖ UTF-8  (inclusion only)
//! sibling bitmap            32 bytes; bit i set ⇔ depth-i sibling non-empty
//! siblings                  32 bytes each, root-to-leaf, non-empty only
//! ```

mod tree;

use std::fmt;

use thiserror::Error;

use crate::crypto::{hash, hash_parts, HASH_ALG_ID, TAG_LEAF, TAG_SALT};
use crate::model::{Datastore, Digest};

pub(crate) use tree::{empty_digest, fold_siblings, SparseTree, DEPTH};

/// Wire-format version byte.
const PROOF_VERSION: u8 = 0x01;

/// 32 bytes of secret randomness; everything unpredictable about a
/// commitment derives from it.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Seed([u8; 32]);

impl Seed {
    /// Fresh seed from the operating system's entropy source.
    pub fn generate() -> Seed {
        let mut bytes = [0u8; 32];
        getrandom::fill(&mut bytes).expect("OS entropy source unavailable");
        Seed(bytes)
    }

    pub const fn from_bytes(bytes: [u8; 32]) -> Seed {
        Seed(bytes)
    }

    pub fn from_hex(hex_str: &str) -> Option<Seed> {
        let bytes = hex::decode(hex_str).ok()?;
        Some(Seed(bytes.try_into().ok()?))
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

// The seed is the secret; keep it out of debug output and logs.
impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Seed(<secret>)")
    }
}

/// Public commitment to a datastore: the tree root plus the hash algorithm
/// that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commitment {
    pub root: Digest,
    pub hash_alg: String,
}

impl Commitment {
    pub fn new(root: Digest) -> Commitment {
        Commitment {
            root,
            hash_alg: HASH_ALG_ID.to_string(),
        }
    }
}

/// The prover's secret: seed and datastore, plus the built tree so queries
/// don't pay reconstruction. Seed and datastore alone regenerate everything.
pub struct SecretState {
    seed: Seed,
    datastore: Datastore,
    tree: SparseTree,
}

impl SecretState {
    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn datastore(&self) -> &Datastore {
        &self.datastore
    }
}

// Redacted like `Seed`: state dumps must not leak the secret material.
impl fmt::Debug for SecretState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SecretState")
            .field("seed", &self.seed)
            .field("entries", &self.datastore.len())
            .finish_non_exhaustive()
    }
}

/// Proof kinds; a non-inclusion proof authenticates the empty leaf at the
/// queried position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofKind {
    Inclusion,
    NonInclusion,
}

/// A (non-)inclusion proof: the authentication path for one label,
/// empty siblings compressed away behind a 256-bit bitmap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZksProof {
    pub kind: ProofKind,
    pub label: Digest,
    /// Per-label salt; present iff `kind` is `Inclusion`.
    pub salt: Option<Digest>,
    /// Committed value; present iff `kind` is `Inclusion`.
    pub value: Option<String>,
    /// Bit `i` set ⇔ the depth-`i` sibling is non-empty and appears in
    /// `siblings`.
    pub sibling_bitmap: [u8; 32],
    /// Non-empty siblings only, root-to-leaf order.
    pub siblings: Vec<Digest>,
}

/// Errors from decoding a wire-format proof.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofCodecError {
    #[error("proof truncated")]
    Truncated,
    #[error("unsupported proof version {0:#04x}")]
    BadVersion(u8),
    #[error("unknown proof kind {0:#04x}")]
    BadKind(u8),
    #[error("sibling count disagrees with bitmap")]
    SiblingCountMismatch,
    #[error("trailing bytes after proof")]
    TrailingBytes,
    #[error("proof value is not UTF-8")]
    BadValueUtf8,
    #[error("proof is not valid hex")]
    BadHex,
}

fn bitmap_bit(bitmap: &[u8; 32], i: usize) -> bool {
    (bitmap[i / 8] >> (7 - (i % 8))) & 1 == 1
}

fn bitmap_set(bitmap: &mut [u8; 32], i: usize) {
    bitmap[i / 8] |= 0x80 >> (i % 8);
}

/// Drops empty siblings from a full 256-entry list, recording their
/// positions in a bitmap. The transparency-log map shares this compression.
pub(crate) fn compress_siblings(full: &[Digest]) -> ([u8; 32], Vec<Digest>) {
    debug_assert_eq!(full.len(), DEPTH);
    let mut bitmap = [0u8; 32];
    let mut kept = Vec::new();
    for (i, s) in full.iter().enumerate() {
        if *s != empty_digest(i + 1) {
            bitmap_set(&mut bitmap, i);
            kept.push(*s);
        }
    }
    (bitmap, kept)
}

/// Inverse of [`compress_siblings`]; `None` when the sibling count
/// disagrees with the bitmap.
pub(crate) fn expand_siblings(bitmap: &[u8; 32], siblings: &[Digest]) -> Option<Vec<Digest>> {
    let popcount: usize = bitmap.iter().map(|b| b.count_ones() as usize).sum();
    if popcount != siblings.len() {
        return None;
    }
    let mut full = Vec::with_capacity(DEPTH);
    let mut next = siblings.iter();
    for i in 0..DEPTH {
        if bitmap_bit(bitmap, i) {
            full.push(*next.next().expect("sibling count checked"));
        } else {
            full.push(empty_digest(i + 1));
        }
    }
    Some(full)
}

/// Derives the salt for one label: `H(0x02 ‖ seed ‖ label)`.
pub fn salt_for(seed: &Seed, label: &Digest) -> Digest {
    hash_parts(&[&[TAG_SALT], seed.as_bytes(), label.as_ref()])
}

/// Leaf digest rule shared by the commitment tree (derived salts) and the
/// transparency-log map (zero salts): `H(0x00 ‖ salt ‖ label ‖ value_hash)`.
pub(crate) fn leaf_digest(salt: &Digest, label: &Digest, value_hash: &Digest) -> Digest {
    hash_parts(&[&[TAG_LEAF], salt.as_ref(), label.as_ref(), value_hash.as_ref()])
}

/// Commits to a datastore under a seed. Deterministic in both inputs; the
/// empty datastore commits to the all-empty root.
pub fn commit(datastore: Datastore, seed: Seed) -> (Commitment, SecretState) {
    let leaves = leaf_digests(&datastore, &seed);
    let tree = SparseTree::build(&leaves);
    finish_commit(datastore, seed, tree)
}

/// Single-threaded [`commit`] with identical output; exists so benchmarks
/// can compare against the parallel path.
pub fn commit_sequential(datastore: Datastore, seed: Seed) -> (Commitment, SecretState) {
    let leaves = leaf_digests_sequential(&datastore, &seed);
    let tree = SparseTree::build_sequential(&leaves);
    finish_commit(datastore, seed, tree)
}

fn finish_commit(datastore: Datastore, seed: Seed, tree: SparseTree) -> (Commitment, SecretState) {
    let commitment = Commitment::new(tree.root_digest());
    (
        commitment,
        SecretState {
            seed,
            datastore,
            tree,
        },
    )
}

#[cfg(feature = "parallel")]
fn leaf_digests(datastore: &Datastore, seed: &Seed) -> Vec<(Digest, Digest)> {
    use rayon::prelude::*;
    datastore
        .entries()
        .par_iter()
        .map(|e| (e.label, entry_leaf(seed, e)))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn leaf_digests(datastore: &Datastore, seed: &Seed) -> Vec<(Digest, Digest)> {
    leaf_digests_sequential(datastore, seed)
}

fn leaf_digests_sequential(datastore: &Datastore, seed: &Seed) -> Vec<(Digest, Digest)> {
    datastore
        .entries()
        .iter()
        .map(|e| (e.label, entry_leaf(seed, e)))
        .collect()
}

fn entry_leaf(seed: &Seed, entry: &crate::model::DatastoreEntry) -> Digest {
    let salt = salt_for(seed, &entry.label);
    leaf_digest(&salt, &entry.label, &hash(entry.value.as_bytes()))
}

/// Answers a query: an inclusion proof plus the value for members, a
/// non-inclusion proof for everything else.
pub fn query(state: &SecretState, label: &Digest) -> (ZksProof, Option<String>) {
    let (sibling_bitmap, siblings) = compress_siblings(&state.tree.siblings(label));

    match state.datastore.get(label) {
        Some(value) => {
            let proof = ZksProof {
                kind: ProofKind::Inclusion,
                label: *label,
                salt: Some(salt_for(&state.seed, label)),
                value: Some(value.to_string()),
                sibling_bitmap,
                siblings,
            };
            (proof, Some(value.to_string()))
        }
        None => {
            let proof = ZksProof {
                kind: ProofKind::NonInclusion,
                label: *label,
                salt: None,
                value: None,
                sibling_bitmap,
                siblings,
            };
            (proof, None)
        }
    }
}

/// Verifies a proof against a commitment. Purely local: recomputes the
/// claimed leaf, folds the authentication path, and compares roots.
/// Malformed or inconsistent proofs return `false`, never an error.
pub fn verify(
    commitment: &Commitment,
    label: &Digest,
    value: Option<&str>,
    proof: &ZksProof,
) -> bool {
    if commitment.hash_alg != HASH_ALG_ID {
        return false;
    }
    if proof.label != *label {
        return false;
    }
    // Kind must agree with value presence on both the caller's side and the
    // proof's own fields.
    let leaf = match (proof.kind, value) {
        (ProofKind::Inclusion, Some(v)) => {
            let Some(salt) = &proof.salt else { return false };
            if proof.value.as_deref() != Some(v) {
                return false;
            }
            leaf_digest(salt, label, &hash(v.as_bytes()))
        }
        (ProofKind::NonInclusion, None) => {
            if proof.salt.is_some() || proof.value.is_some() {
                return false;
            }
            tree::empty_digest(DEPTH)
        }
        _ => return false,
    };

    let Some(full) = expand_siblings(&proof.sibling_bitmap, &proof.siblings) else {
        return false;
    };
    tree::fold_siblings(leaf, label, &full) == commitment.root
}

impl ZksProof {
    /// Serializes to the wire format. Values longer than a u16 length
    /// prefix cannot occur for canonical component ids and are a caller
    /// bug.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + 32 + 32 + 32 * self.siblings.len());
        out.push(PROOF_VERSION);
        out.push(match self.kind {
            ProofKind::Inclusion => 0x01,
            ProofKind::NonInclusion => 0x00,
        });
        out.extend_from_slice(self.label.as_ref());
        if self.kind == ProofKind::Inclusion {
            let salt = self.salt.as_ref().expect("inclusion proof carries a salt");
            let value = self.value.as_ref().expect("inclusion proof carries a value");
            assert!(value.len() <= u16::MAX as usize, "value too long for wire format");
            out.extend_from_slice(salt.as_ref());
            out.extend_from_slice(&(value.len() as u16).to_be_bytes());
            out.extend_from_slice(value.as_bytes());
        }
        out.extend_from_slice(&self.sibling_bitmap);
        for s in &self.siblings {
            out.extend_from_slice(s.as_ref());
        }
        out
    }

    /// Inverse of [`ZksProof::encode`]; rejects trailing bytes and any
    /// structural inconsistency.
    pub fn decode(bytes: &[u8]) -> Result<ZksProof, ProofCodecError> {
        let mut cursor = Cursor { bytes, pos: 0 };
        let version = cursor.take_byte()?;
        if version != PROOF_VERSION {
            return Err(ProofCodecError::BadVersion(version));
        }
        let kind = match cursor.take_byte()? {
            0x01 => ProofKind::Inclusion,
            0x00 => ProofKind::NonInclusion,
            other => return Err(ProofCodecError::BadKind(other)),
        };
        let label = cursor.take_digest()?;
        let (salt, value) = if kind == ProofKind::Inclusion {
            let salt = cursor.take_digest()?;
            let len = u16::from_be_bytes(cursor.take_array::<2>()?) as usize;
            let raw = cursor.take_slice(len)?;
            let value = std::str::from_utf8(raw)
                .map_err(|_| ProofCodecError::BadValueUtf8)?
                .to_string();
            (Some(salt), Some(value))
        } else {
            (None, None)
        };
        let sibling_bitmap = cursor.take_array::<32>()?;
        let popcount: usize = sibling_bitmap.iter().map(|b| b.count_ones() as usize).sum();
        let mut siblings = Vec::with_capacity(popcount);
        for _ in 0..popcount {
            siblings.push(cursor.take_digest().map_err(|_| ProofCodecError::SiblingCountMismatch)?);
        }
        if cursor.pos != bytes.len() {
            return Err(ProofCodecError::TrailingBytes);
        }
        Ok(ZksProof {
            kind,
            label,
            salt,
            value,
            sibling_bitmap,
            siblings,
        })
    }

    /// Wire bytes as lowercase hex, the transport encoding.
    pub fn to_hex(&self) -> String {
        hex::encode(self.encode())
    }

    pub fn from_hex(hex_str: &str) -> Result<ZksProof, ProofCodecError> {
        let bytes = hex::decode(hex_str).map_err(|_| ProofCodecError::BadHex)?;
        ZksProof::decode(&bytes)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take_slice(&mut self, n: usize) -> Result<&[u8], ProofCodecError> {
        let end = self.pos.checked_add(n).ok_or(ProofCodecError::Truncated)?;
        if end > self.bytes.len() {
            return Err(ProofCodecError::Truncated);
        }
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn take_byte(&mut self) -> Result<u8, ProofCodecError> {
        Ok(self.take_slice(1)?[0])
    }

    fn take_array<const N: usize>(&mut self) -> Result<[u8; N], ProofCodecError> {
        Ok(self.take_slice(N)?.try_into().expect("slice length N"))
    }

    fn take_digest(&mut self) -> Result<Digest, ProofCodecError> {
        Ok(Digest::from_bytes(self.take_array::<32>()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ComponentId, Ecosystem};
    use crate::sbom::components_to_datastore;

    fn npm(name: &str) -> ComponentId {
        ComponentId::new(None, name, "1", Ecosystem::Npm).unwrap()
    }

    fn two_entry_state() -> (Commitment, SecretState) {
        let ds = components_to_datastore(&[npm("a"), npm("b")]);
        commit(ds, Seed::from_bytes([0x01; 32]))
    }

    #[test]
    fn empty_datastore_commits_to_all_empty_root() {
        let (c, _) = commit(Datastore::default(), Seed::from_bytes([9; 32]));
        assert_eq!(c.root, tree::empty_digest(0));
        // Spot values pinned against an independent reimplementation of the
        // leaf/node equations.
        assert_eq!(
            tree::empty_digest(0).to_hex(),
            "933f40aae7a4ce7f2705c889bd9417d6360695ec0852fb3e1326b1c03dc6da13"
        );
        assert_eq!(
            tree::empty_digest(255).to_hex(),
            "086dabbfde6914778334b717e94921e353b7cc3f103cd2d19c5a825f30c067cc"
        );
    }

    #[test]
    fn commit_is_deterministic() {
        let ds = components_to_datastore(&[npm("a"), npm("b"), npm("c")]);
        let seed = Seed::from_bytes([4; 32]);
        let (c1, _) = commit(ds.clone(), seed);
        let (c2, _) = commit(ds, seed);
        assert_eq!(c1, c2);
    }

    #[test]
    fn commit_root_matches_independent_recomputation() {
        // Root over {(H("a@1@NPM"), "a@1@NPM"), (H("b@1@NPM"), "b@1@NPM")}
        // with seed 0x01…01, pinned against a standalone script implementing
        // the same leaf/salt/node equations.
        assert_eq!(
            hash(b"a@1@NPM").to_hex(),
            "b0540f66ea153999b240f60c842a0406021940662af5de1bd7f96962f000f80e"
        );
        assert_eq!(
            hash(b"b@1@NPM").to_hex(),
            "301d0bc8e31c530c76e406c187c32718471b678c3f7045d7a1f7f5c75e126e09"
        );
        let (c, _) = two_entry_state();
        assert_eq!(
            c.root.to_hex(),
            "e519a4e4bf24e7dba3b8e856dc59dbf800f2ce7656167500bc8f1231d5b80d7f"
        );

        let ds_single = components_to_datastore(&[npm("a")]);
        let (c_single, _) = commit(ds_single, Seed::from_bytes([0x01; 32]));
        assert_eq!(
            c_single.root.to_hex(),
            "407197cc818d0bfc59ee5ff5e36bbeed362e39ff7425ec20f867ea527a5b4ccb"
        );
    }

    #[test]
    fn parallel_and_sequential_commit_agree() {
        let ids: Vec<ComponentId> = (0..300).map(|i| npm(&format!("p{i}"))).collect();
        let ds = components_to_datastore(&ids);
        let seed = Seed::from_bytes([0x42; 32]);
        let (cp, _) = commit(ds.clone(), seed);
        let (cs, _) = commit_sequential(ds, seed);
        assert_eq!(cp, cs);
    }

    #[test]
    fn member_query_yields_verifying_inclusion() {
        let (c, s) = two_entry_state();
        let label = hash(b"a@1@NPM");
        let (proof, value) = query(&s, &label);
        assert_eq!(proof.kind, ProofKind::Inclusion);
        assert_eq!(value.as_deref(), Some("a@1@NPM"));
        assert!(verify(&c, &label, Some("a@1@NPM"), &proof));
    }

    #[test]
    fn non_member_query_yields_verifying_non_inclusion() {
        let (c, s) = two_entry_state();
        let label = hash(b"z@9@NPM");
        let (proof, value) = query(&s, &label);
        assert_eq!(proof.kind, ProofKind::NonInclusion);
        assert_eq!(value, None);
        assert!(proof.salt.is_none() && proof.value.is_none());
        assert!(verify(&c, &label, None, &proof));
    }

    #[test]
    fn any_label_against_empty_commitment_proves_non_inclusion() {
        let (c, s) = commit(Datastore::default(), Seed::from_bytes([7; 32]));
        let label = hash(b"whatever");
        let (proof, value) = query(&s, &label);
        assert_eq!(proof.kind, ProofKind::NonInclusion);
        assert!(value.is_none());
        assert!(verify(&c, &label, None, &proof));
    }

    #[test]
    fn sixteen_entry_exhaustive_membership_queries() {
        let ids: Vec<ComponentId> = (0..16).map(|i| npm(&format!("m{i}"))).collect();
        let ds = components_to_datastore(&ids);
        let (c, s) = commit(ds, Seed::from_bytes([0x10; 32]));

        for id in &ids {
            let label = hash(id.canonical().as_bytes());
            let (proof, value) = query(&s, &label);
            assert_eq!(proof.kind, ProofKind::Inclusion);
            assert!(verify(&c, &label, value.as_deref(), &proof));
        }
        for i in 0..16 {
            let label = hash(format!("absent{i}@1@NPM").as_bytes());
            let (proof, value) = query(&s, &label);
            assert_eq!(proof.kind, ProofKind::NonInclusion);
            assert!(value.is_none());
            assert!(verify(&c, &label, None, &proof));
        }
    }

    #[test]
    fn flipped_sibling_byte_fails_verification() {
        let (c, s) = two_entry_state();
        let label = hash(b"a@1@NPM");
        let (mut proof, _) = query(&s, &label);
        assert!(!proof.siblings.is_empty());
        let mut bytes = *proof.siblings[0].as_bytes();
        bytes[5] ^= 0x20;
        proof.siblings[0] = Digest::from_bytes(bytes);
        assert!(!verify(&c, &label, Some("a@1@NPM"), &proof));
    }

    #[test]
    fn kind_value_consistency_is_enforced() {
        let (c, s) = two_entry_state();
        let member = hash(b"a@1@NPM");
        let absent = hash(b"z@9@NPM");
        let (inc, _) = query(&s, &member);
        let (non, _) = query(&s, &absent);

        // Inclusion proof presented with no value, and vice versa.
        assert!(!verify(&c, &member, None, &inc));
        assert!(!verify(&c, &absent, Some("z@9@NPM"), &non));
        // Value swapped for a different string.
        assert!(!verify(&c, &member, Some("b@1@NPM"), &inc));
        // Label mismatch between argument and proof.
        assert!(!verify(&c, &absent, Some("a@1@NPM"), &inc));
    }

    #[test]
    fn wrong_hash_alg_never_verifies() {
        let (c, s) = two_entry_state();
        let label = hash(b"a@1@NPM");
        let (proof, _) = query(&s, &label);
        let bad = Commitment {
            root: c.root,
            hash_alg: "sha3-256".into(),
        };
        assert!(!verify(&bad, &label, Some("a@1@NPM"), &proof));
    }

    #[test]
    fn wire_round_trip_both_kinds() {
        let (_, s) = two_entry_state();
        for label in [hash(b"a@1@NPM"), hash(b"nope@1@NPM")] {
            let (proof, _) = query(&s, &label);
            let decoded = ZksProof::decode(&proof.encode()).unwrap();
            assert_eq!(decoded, proof);
            let from_hex = ZksProof::from_hex(&proof.to_hex()).unwrap();
            assert_eq!(from_hex, proof);
        }
    }

    #[test]
    fn decode_rejects_structural_damage() {
        let (_, s) = two_entry_state();
        let (proof, _) = query(&s, &hash(b"a@1@NPM"));
        let bytes = proof.encode();

        let mut bad = bytes.clone();
        bad[0] = 0x02;
        assert_eq!(ZksProof::decode(&bad), Err(ProofCodecError::BadVersion(0x02)));

        let mut bad = bytes.clone();
        bad[1] = 0x07;
        assert_eq!(ZksProof::decode(&bad), Err(ProofCodecError::BadKind(0x07)));

        assert_eq!(
            ZksProof::decode(&bytes[..bytes.len() - 1]),
            Err(ProofCodecError::SiblingCountMismatch)
        );
        assert_eq!(ZksProof::decode(&[]), Err(ProofCodecError::Truncated));

        let mut extended = bytes.clone();
        extended.push(0x00);
        assert_eq!(ZksProof::decode(&extended), Err(ProofCodecError::TrailingBytes));

        assert_eq!(ZksProof::from_hex("zz"), Err(ProofCodecError::BadHex));
    }

    #[test]
    fn proof_wire_size_is_bounded() {
        let ids: Vec<ComponentId> = (0..1000).map(|i| npm(&format!("big{i}"))).collect();
        let ds = components_to_datastore(&ids);
        let (_, s) = commit(ds, Seed::from_bytes([3; 32]));
        let (proof, _) = query(&s, &hash(b"big500@1@NPM"));
        // 2 + 32·2 + 2 + |value| + 32 + 32·256 is the absolute ceiling;
        // realistic paths stay a couple of orders below 16 KiB.
        assert!(proof.encode().len() < 16 * 1024);
    }

    #[test]
    fn cross_state_proof_replay_fails() {
        let (c1, s1) = two_entry_state();
        let ds2 = components_to_datastore(&[npm("a"), npm("c")]);
        let (c2, s2) = commit(ds2, Seed::from_bytes([0x02; 32]));

        let label = hash(b"a@1@NPM");
        let (p1, _) = query(&s1, &label);
        let (p2, _) = query(&s2, &label);
        // Proofs only verify against the commitment they were issued under.
        assert!(!verify(&c2, &label, Some("a@1@NPM"), &p1));
        assert!(!verify(&c1, &label, Some("a@1@NPM"), &p2));
    }

    #[test]
    fn seed_changes_root_and_salts() {
        let ds = components_to_datastore(&[npm("a"), npm("b")]);
        let (c1, s1) = commit(ds.clone(), Seed::from_bytes([0x01; 32]));
        let (c2, s2) = commit(ds, Seed::from_bytes([0x02; 32]));
        assert_ne!(c1.root, c2.root);

        let label = hash(b"a@1@NPM");
        let (p1, _) = query(&s1, &label);
        let (p2, _) = query(&s2, &label);
        assert_ne!(p1.salt, p2.salt);
    }

    #[test]
    fn seed_hex_round_trip_and_generation() {
        let s = Seed::from_bytes([0xaa; 32]);
        assert_eq!(Seed::from_hex(&s.to_hex()).unwrap(), s);
        assert!(Seed::from_hex("abcd").is_none());
        let g1 = Seed::generate();
        let g2 = Seed::generate();
        assert_ne!(g1, g2, "fresh seeds must differ");
        assert_eq!(format!("{g1:?}"), "Seed(<secret>)");
    }
}
