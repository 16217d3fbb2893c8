//! Domain types shared by every module: component identities, 256-bit
//! digests, datastores, and consumer verdicts.
//!
//! The canonical text form of a component is `[group:]name@version@ECOSYSTEM`
//! and round-trips through [`ComponentId::parse`] / [`ComponentId::canonical`].
//! Datastores are ordered `(label, value)` collections with
//! `label = H(value)`; they are always built through hashing constructors, so
//! the self-consistency invariant holds by construction.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Package ecosystems recognized by the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ecosystem {
    Cargo,
    Golang,
    Maven,
    Npm,
}

impl Ecosystem {
    /// Uppercase token used as the terminal segment of a canonical id.
    pub fn token(&self) -> &'static str {
        match self {
            Ecosystem::Cargo => "CARGO",
            Ecosystem::Golang => "GOLANG",
            Ecosystem::Maven => "MAVEN",
            Ecosystem::Npm => "NPM",
        }
    }

    /// Human-facing name, matching common ecosystem spelling.
    pub fn display_name(&self) -> &'static str {
        match self {
            Ecosystem::Cargo => "Cargo",
            Ecosystem::Golang => "Go",
            Ecosystem::Maven => "Maven",
            Ecosystem::Npm => "npm",
        }
    }

    pub fn from_token(token: &str) -> Option<Ecosystem> {
        match token {
            "CARGO" => Some(Ecosystem::Cargo),
            "GOLANG" => Some(Ecosystem::Golang),
            "MAVEN" => Some(Ecosystem::Maven),
            "NPM" => Some(Ecosystem::Npm),
            _ => None,
        }
    }

    /// Maps a package-url type (`pkg:<type>/...`) to an ecosystem.
    pub fn from_purl_type(purl_type: &str) -> Option<Ecosystem> {
        match purl_type {
            "cargo" => Some(Ecosystem::Cargo),
            "golang" => Some(Ecosystem::Golang),
            "maven" => Some(Ecosystem::Maven),
            "npm" => Some(Ecosystem::Npm),
            _ => None,
        }
    }

    pub const ALL: [Ecosystem; 4] = [
        Ecosystem::Cargo,
        Ecosystem::Golang,
        Ecosystem::Maven,
        Ecosystem::Npm,
    ];
}

impl fmt::Display for Ecosystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

// On the wire an ecosystem is its token; accept any case on input.
impl Serialize for Ecosystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.token())
    }
}

impl<'de> Deserialize<'de> for Ecosystem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ecosystem::from_token(&s.to_ascii_uppercase())
            .ok_or_else(|| serde::de::Error::custom(format!("unknown ecosystem {s:?}")))
    }
}

/// Errors from constructing or parsing domain types.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("malformed component: {0}")]
    MalformedComponent(String),
    #[error("malformed digest: {0}")]
    MalformedDigest(String),
}

/// Identity of one software component: optional group, name, version, and
/// ecosystem.
///
/// `@` is reserved as the canonical separator and is rejected in every field;
/// `:` is rejected in group and name (it separates group from name). The
/// canonical form is therefore unambiguous and injective over valid ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentId {
    group: Option<String>,
    name: String,
    version: String,
    ecosystem: Ecosystem,
}

impl ComponentId {
    pub fn new(
        group: Option<&str>,
        name: &str,
        version: &str,
        ecosystem: Ecosystem,
    ) -> Result<Self, ModelError> {
        if name.is_empty() {
            return Err(ModelError::MalformedComponent("empty name".into()));
        }
        if version.is_empty() {
            return Err(ModelError::MalformedComponent("empty version".into()));
        }
        if let Some(g) = group {
            if g.is_empty() {
                return Err(ModelError::MalformedComponent("empty group".into()));
            }
            if g.contains('@') || g.contains(':') {
                return Err(ModelError::MalformedComponent(format!(
                    "reserved separator in group {g:?}"
                )));
            }
        }
        if name.contains('@') || name.contains(':') {
            return Err(ModelError::MalformedComponent(format!(
                "reserved separator in name {name:?}"
            )));
        }
        if version.contains('@') {
            return Err(ModelError::MalformedComponent(format!(
                "reserved separator in version {version:?}"
            )));
        }
        Ok(ComponentId {
            group: group.map(str::to_owned),
            name: name.to_owned(),
            version: version.to_owned(),
            ecosystem,
        })
    }

    pub fn group(&self) -> Option<&str> {
        self.group.as_deref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn ecosystem(&self) -> Ecosystem {
        self.ecosystem
    }

    /// Canonical text form `[group:]name@version@ECOSYSTEM`.
    pub fn canonical(&self) -> String {
        match &self.group {
            Some(g) => format!("{g}:{}@{}@{}", self.name, self.version, self.ecosystem.token()),
            None => format!("{}@{}@{}", self.name, self.version, self.ecosystem.token()),
        }
    }

    /// Inverse of [`ComponentId::canonical`]: splits on the last two `@`
    /// separators; an optional group is the prefix before the first `:` of
    /// the leading segment.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let (rest, eco_token) = text
            .rsplit_once('@')
            .ok_or_else(|| ModelError::MalformedComponent(format!("missing separators in {text:?}")))?;
        let ecosystem = Ecosystem::from_token(eco_token).ok_or_else(|| {
            ModelError::MalformedComponent(format!("unknown ecosystem token {eco_token:?}"))
        })?;
        let (coords, version) = rest
            .rsplit_once('@')
            .ok_or_else(|| ModelError::MalformedComponent(format!("missing version separator in {text:?}")))?;
        let (group, name) = match coords.split_once(':') {
            Some((g, n)) => (Some(g), n),
            None => (None, coords),
        };
        ComponentId::new(group, name, version, ecosystem)
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for ComponentId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ComponentId::parse(s)
    }
}

impl PartialOrd for ComponentId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ComponentId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical().cmp(&other.canonical())
    }
}

// On the wire a component is always its canonical string.
impl Serialize for ComponentId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.canonical())
    }
}

impl<'de> Deserialize<'de> for ComponentId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        ComponentId::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A 256-bit digest, rendered as 64 lowercase hex characters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digest([u8; 32]);

impl Digest {
    pub const LEN: usize = 32;
    pub const ZERO: Digest = Digest([0u8; 32]);

    pub const fn from_bytes(bytes: [u8; 32]) -> Self {
        Digest(bytes)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self, ModelError> {
        let arr: [u8; 32] = bytes
            .try_into()
            .map_err(|_| ModelError::MalformedDigest(format!("length {}", bytes.len())))?;
        Ok(Digest(arr))
    }

    pub fn from_hex(hex_str: &str) -> Result<Self, ModelError> {
        if hex_str.len() != 64 {
            return Err(ModelError::MalformedDigest(format!(
                "hex length {}, expected 64",
                hex_str.len()
            )));
        }
        if hex_str.bytes().any(|b| b.is_ascii_uppercase()) {
            return Err(ModelError::MalformedDigest("uppercase hex".into()));
        }
        let bytes = hex::decode(hex_str)
            .map_err(|e| ModelError::MalformedDigest(e.to_string()))?;
        Self::from_slice(&bytes)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    /// Bit `i` of the digest, MSB-first within each byte. Bit 0 is the most
    /// significant bit of byte 0. This is the branching order of the sparse
    /// Merkle tree.
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < 256);
        (self.0[i / 8] >> (7 - (i % 8))) & 1 == 1
    }
}

impl AsRef<[u8]> for Digest {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.to_hex())
    }
}

impl Serialize for Digest {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Digest {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Digest::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// One committed entry: `label = H(value)` where value is a canonical
/// component id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatastoreEntry {
    pub label: Digest,
    pub value: String,
}

/// The committed set: `(label, value)` pairs sorted ascending by label bytes,
/// labels unique. Contains component identities only — nothing that changes
/// over time.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Datastore {
    entries: Vec<DatastoreEntry>,
}

impl Datastore {
    /// Builds from pre-hashed pairs; sorts by label and collapses duplicate
    /// labels. Callers are responsible for `label = H(value)`.
    pub(crate) fn from_pairs(mut pairs: Vec<(Digest, String)>) -> Self {
        pairs.sort_by_key(|pair| pair.0);
        pairs.dedup_by(|a, b| a.0 == b.0);
        Datastore {
            entries: pairs
                .into_iter()
                .map(|(label, value)| DatastoreEntry { label, value })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[DatastoreEntry] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &DatastoreEntry> {
        self.entries.iter()
    }

    /// Value stored under `label`, if present.
    pub fn get(&self, label: &Digest) -> Option<&str> {
        self.entries
            .binary_search_by(|e| e.label.cmp(label))
            .ok()
            .map(|i| self.entries[i].value.as_str())
    }

    pub fn contains(&self, label: &Digest) -> bool {
        self.get(label).is_some()
    }
}

/// Outcome of consumer-side proof verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    /// At least one affected component is proven present.
    Affected,
    /// Every affected component carries a verified non-inclusion proof.
    NotAffected,
    /// The response failed coverage, relevance, or cryptographic checks.
    Invalid,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictKind::Affected => f.write_str("Affected"),
            VerdictKind::NotAffected => f.write_str("NotAffected"),
            VerdictKind::Invalid => f.write_str("Invalid"),
        }
    }
}

/// Verdict plus a human-readable reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub detail: String,
}

impl Verdict {
    pub fn new(kind: VerdictKind, detail: impl Into<String>) -> Self {
        Verdict {
            kind,
            detail: detail.into(),
        }
    }
}
