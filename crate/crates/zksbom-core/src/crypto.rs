//! Hashing and signing primitives.
//!
//! Every hash in the system is Blake2b with a 256-bit output, identified on
//! the wire as `blake2b-256`. Inputs are domain-separated by a single prefix
//! byte so that leaves, internal nodes, salts, and binding messages can never
//! collide across roles:
//!
//! | tag    | role                              |
//! |--------|-----------------------------------|
//! | `0x00` | tree leaf                         |
//! | `0x01` | internal node / empty-subtree fold|
//! | `0x02` | per-label salt derivation         |
//! | `0x03` | artifact binding message          |
//!
//! Signatures are Ed25519. Key generation is deterministic from a 32-byte
//! seed so tests and simulations are reproducible.

use blake2::digest::consts::U32;
use blake2::{Blake2b, Digest as _};
use ed25519_dalek::{Signature, Signer, SigningKey, Verifier, VerifyingKey};

use crate::model::Digest;

/// Identifier of the hash algorithm, recorded in log entries and record
/// files.
pub const HASH_ALG_ID: &str = "blake2b-256";

/// Domain-separation tag for leaf hashes.
pub const TAG_LEAF: u8 = 0x00;
/// Domain-separation tag for internal-node hashes.
pub const TAG_NODE: u8 = 0x01;
/// Domain-separation tag for salt derivation.
pub const TAG_SALT: u8 = 0x02;
/// Domain-separation tag for artifact binding messages.
pub const TAG_BINDING: u8 = 0x03;

type Hasher = Blake2b<U32>;

/// Blake2b-256 over raw bytes, no domain tag. Used for labels
/// (`H(canonical id)`), artifact hashes, and log-entry value hashes.
pub fn hash(data: &[u8]) -> Digest {
    let mut h = Hasher::new();
    h.update(data);
    Digest::from_bytes(h.finalize().into())
}

/// Blake2b-256 over the concatenation of several byte slices.
pub fn hash_parts(parts: &[&[u8]]) -> Digest {
    let mut h = Hasher::new();
    for p in parts {
        h.update(p);
    }
    Digest::from_bytes(h.finalize().into())
}

/// A signing keypair (Ed25519).
pub struct Keypair {
    signing: SigningKey,
}

impl Keypair {
    /// Deterministic keypair from a 32-byte seed.
    pub fn from_seed(seed: [u8; 32]) -> Self {
        Keypair {
            signing: SigningKey::from_bytes(&seed),
        }
    }

    /// Public half, serialized to 32 bytes.
    pub fn public_key(&self) -> PublicKey {
        PublicKey {
            bytes: self.signing.verifying_key().to_bytes(),
        }
    }

    /// Signs a message; Ed25519 signing is deterministic, so equal messages
    /// yield equal signatures under the same key.
    pub fn sign(&self, message: &[u8]) -> Vec<u8> {
        self.signing.sign(message).to_bytes().to_vec()
    }
}

/// A verifying key, serialized to 32 bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PublicKey {
    bytes: [u8; 32],
}

impl PublicKey {
    pub fn from_bytes(bytes: [u8; 32]) -> Self {
        PublicKey { bytes }
    }

    pub fn from_slice(bytes: &[u8]) -> Option<Self> {
        let arr: [u8; 32] = bytes.try_into().ok()?;
        Some(PublicKey { bytes: arr })
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.bytes)
    }

    pub fn from_hex(hex_str: &str) -> Option<Self> {
        let bytes = hex::decode(hex_str).ok()?;
        Self::from_slice(&bytes)
    }

    /// Verifies `signature` over `message`. Malformed keys or signatures
    /// verify as `false`, never as an error: a bad signature is a protocol
    /// outcome, not an exception.
    pub fn verify(&self, message: &[u8], signature: &[u8]) -> bool {
        let Ok(key) = VerifyingKey::from_bytes(&self.bytes) else {
            return false;
        };
        let Ok(sig_bytes) = <&[u8; 64]>::try_from(signature) else {
            return false;
        };
        let sig = Signature::from_bytes(sig_bytes);
        key.verify(message, &sig).is_ok()
    }
}
