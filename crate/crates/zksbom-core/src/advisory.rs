//! Offline advisory database: resolve CVE identifiers to affected
//! component identities.
//!
//! The database is a JSON fixture — an array of
//! `{"id": "...", "affected": ["<canonical component id>", ...]}` objects —
//! with version ranges pre-expanded into exact versions at authoring time.
//! Resolution returns the full expanded list because a (non-)inclusion
//! proof must be produced for every affected version of every affected
//! component; the consumer re-resolves the same identifier against the same
//! fixture and must obtain the identical list, or its coverage check fails.
//!
//! Component identifiers are matched exactly. If an SBOM and an advisory
//! spell the same package differently, the proofs will be about different
//! labels — a known limit of identifier-based matching, not something this
//! module papers over.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::model::ComponentId;

/// One advisory: an identifier and its expanded affected set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Advisory {
    pub id: String,
    pub affected: Vec<ComponentId>,
}

/// An immutable advisory database loaded from a fixture.
#[derive(Debug, Clone)]
pub struct AdvisoryDb {
    advisories: BTreeMap<String, Advisory>,
    source: String,
}

/// Errors from loading or querying the database.
#[derive(Debug, Error)]
pub enum AdvisoryError {
    #[error("advisory fixture {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed advisory fixture: {0}")]
    MalformedFixture(String),
    #[error("duplicate advisory id {0:?}")]
    DuplicateAdvisoryId(String),
    #[error("unknown CVE {0:?}")]
    UnknownCve(String),
}

#[derive(Deserialize)]
struct RawAdvisory {
    id: String,
    affected: Vec<String>,
}

impl AdvisoryDb {
    /// Loads a fixture file from disk.
    pub fn load(path: impl AsRef<Path>) -> Result<AdvisoryDb, AdvisoryError> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| AdvisoryError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_bytes(&bytes, &path.display().to_string())
    }

    /// Parses fixture bytes; `source` is recorded for error messages only.
    pub fn from_bytes(bytes: &[u8], source: &str) -> Result<AdvisoryDb, AdvisoryError> {
        let raw: Vec<RawAdvisory> = serde_json::from_slice(bytes)
            .map_err(|e| AdvisoryError::MalformedFixture(e.to_string()))?;
        let mut advisories = BTreeMap::new();
        for entry in raw {
            if entry.affected.is_empty() {
                return Err(AdvisoryError::MalformedFixture(format!(
                    "advisory {:?} has an empty affected list",
                    entry.id
                )));
            }
            let affected = entry
                .affected
                .iter()
                .map(|s| ComponentId::parse(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| {
                    AdvisoryError::MalformedFixture(format!("advisory {:?}: {e}", entry.id))
                })?;
            let advisory = Advisory {
                id: entry.id.clone(),
                affected,
            };
            if advisories.insert(entry.id.clone(), advisory).is_some() {
                return Err(AdvisoryError::DuplicateAdvisoryId(entry.id));
            }
        }
        Ok(AdvisoryDb {
            advisories,
            source: source.to_string(),
        })
    }

    pub fn len(&self) -> usize {
        self.advisories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.advisories.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.advisories.keys().map(String::as_str)
    }

    /// Full expanded affected list for a CVE — every version of every
    /// affected component, in fixture order.
    pub fn resolve(&self, cve_id: &str) -> Result<&[ComponentId], AdvisoryError> {
        self.advisories
            .get(cve_id)
            .map(|a| a.affected.as_slice())
            .ok_or_else(|| AdvisoryError::UnknownCve(cve_id.to_string()))
    }
}
