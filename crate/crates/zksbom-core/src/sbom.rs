//! CycloneDX SBOM ingestion: parse a JSON document into component
//! identities and convert them to a [`Datastore`].
//!
//! Only the top-level `components` array is read. Dependency edges,
//! licenses, file hashes, and timestamps are deliberately ignored: the
//! committed set consists solely of component identities, nothing that may
//! change over time. The root component described under `metadata` is also
//! excluded — the artifact itself is identified by its own hash, not as a
//! member of its dependency set.
//!
//! Components carrying a package-url are mapped through its type
//! (`cargo`, `golang`, `maven`, `npm`); components without one fall back to
//! their `(group, name, version)` fields plus a document-level ecosystem
//! hint taken from the root component's purl. Anything else is skipped and
//! counted, never fatal: real-world documents routinely mix in ecosystems
//! outside this protocol's scope.

use serde::Deserialize;
use thiserror::Error;

use crate::crypto;
use crate::model::{ComponentId, Datastore, Ecosystem};

/// CycloneDX spec versions this parser accepts.
const SUPPORTED_SPEC_VERSIONS: [&str; 3] = ["1.4", "1.5", "1.6"];

/// Errors from [`parse_cyclonedx`].
#[derive(Debug, Error)]
pub enum SbomError {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("unsupported spec version {0:?} (supported: 1.4, 1.5, 1.6)")]
    UnsupportedSpecVersion(String),
}

/// A parsed SBOM: an identifying string and the recognized components,
/// deduplicated on canonical id, in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SbomDocument {
    pub serial_or_name: String,
    pub components: Vec<ComponentId>,
}

/// Parse result: the document plus ingestion counters.
#[derive(Debug, Clone)]
pub struct IngestReport {
    pub document: SbomDocument,
    /// Components recognized and canonicalized (before deduplication).
    pub parsed: usize,
    /// Components skipped, with one reason string each.
    pub skipped: Vec<String>,
}

impl IngestReport {
    pub fn skipped_count(&self) -> usize {
        self.skipped.len()
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawBom {
    bom_format: Option<String>,
    spec_version: Option<String>,
    serial_number: Option<String>,
    metadata: Option<RawMetadata>,
    #[serde(default)]
    components: Vec<RawComponent>,
}

#[derive(Deserialize)]
struct RawMetadata {
    component: Option<RawComponent>,
}

#[derive(Deserialize)]
struct RawComponent {
    purl: Option<String>,
    group: Option<String>,
    name: Option<String>,
    version: Option<String>,
}

/// Parses a CycloneDX JSON document (spec versions 1.4–1.6).
pub fn parse_cyclonedx(document_bytes: &[u8]) -> Result<IngestReport, SbomError> {
    let raw: RawBom = serde_json::from_slice(document_bytes)
        .map_err(|e| SbomError::MalformedDocument(e.to_string()))?;

    match raw.bom_format.as_deref() {
        Some("CycloneDX") => {}
        Some(other) => {
            return Err(SbomError::MalformedDocument(format!(
                "bomFormat {other:?}, expected \"CycloneDX\""
            )))
        }
        None => {
            return Err(SbomError::MalformedDocument("missing bomFormat".into()));
        }
    }
    let spec_version = raw
        .spec_version
        .ok_or_else(|| SbomError::MalformedDocument("missing specVersion".into()))?;
    if !SUPPORTED_SPEC_VERSIONS.contains(&spec_version.as_str()) {
        return Err(SbomError::UnsupportedSpecVersion(spec_version));
    }

    let root = raw.metadata.as_ref().and_then(|m| m.component.as_ref());
    // Document-level ecosystem hint for purl-less components, taken from the
    // root component's purl type.
    let hint = root
        .and_then(|c| c.purl.as_deref())
        .and_then(purl_type)
        .and_then(|t| Ecosystem::from_purl_type(&t));

    let serial_or_name = raw
        .serial_number
        .or_else(|| root.and_then(|c| c.name.clone()))
        .unwrap_or_default();

    let mut components = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut parsed = 0usize;
    let mut skipped = Vec::new();

    for (idx, c) in raw.components.iter().enumerate() {
        match ingest_component(c, hint) {
            Ok(id) => {
                parsed += 1;
                if seen.insert(id.canonical()) {
                    components.push(id);
                }
            }
            Err(reason) => skipped.push(format!("components[{idx}]: {reason}")),
        }
    }

    Ok(IngestReport {
        document: SbomDocument {
            serial_or_name,
            components,
        },
        parsed,
        skipped,
    })
}

fn ingest_component(c: &RawComponent, hint: Option<Ecosystem>) -> Result<ComponentId, String> {
    if let Some(purl) = c.purl.as_deref() {
        return component_from_purl(purl);
    }
    let Some(ecosystem) = hint else {
        return Err("no purl and no document-level ecosystem hint".into());
    };
    let name = c.name.as_deref().filter(|n| !n.is_empty()).ok_or("missing name")?;
    let version = c
        .version
        .as_deref()
        .filter(|v| !v.is_empty())
        .ok_or("missing version")?;
    let group = c.group.as_deref().filter(|g| !g.is_empty());
    ComponentId::new(group, name, version, ecosystem).map_err(|e| e.to_string())
}

/// Type segment of a purl (`pkg:<type>/...`).
fn purl_type(purl: &str) -> Option<String> {
    let rest = purl.strip_prefix("pkg:")?;
    let rest = rest.trim_start_matches('/');
    let end = rest.find('/')?;
    Some(rest[..end].to_ascii_lowercase())
}

/// Maps a package-url to a [`ComponentId`].
///
/// Handles the subset of the purl grammar that identifies a component:
/// `pkg:type/namespace.../name@version`, with qualifiers (`?...`) and
/// subpath (`#...`) stripped and each segment percent-decoded. npm scope
/// namespaces (`@scope`) lose their leading `@`, which is a purl rendering
/// artifact rather than part of the scope name.
fn component_from_purl(purl: &str) -> Result<ComponentId, String> {
    let rest = purl
        .strip_prefix("pkg:")
        .ok_or_else(|| format!("purl {purl:?} missing pkg: scheme"))?;
    let rest = rest.trim_start_matches('/');
    let rest = rest.split('#').next().unwrap_or(rest);
    let rest = rest.split('?').next().unwrap_or(rest);

    let (type_str, coords) = rest
        .split_once('/')
        .ok_or_else(|| format!("purl {purl:?} has no name segment"))?;
    let ecosystem = Ecosystem::from_purl_type(&type_str.to_ascii_lowercase())
        .ok_or_else(|| format!("unrecognized purl type {type_str:?}"))?;

    let (coords, version) = coords
        .rsplit_once('@')
        .ok_or_else(|| format!("purl {purl:?} has no version"))?;
    let version = percent_decode(version)?;

    let segments: Vec<String> = coords
        .split('/')
        .map(percent_decode)
        .collect::<Result<_, _>>()?;
    let (namespace, name) = match segments.split_last() {
        Some((name, [])) => (None, name.clone()),
        Some((name, ns)) => (Some(ns.join("/")), name.clone()),
        None => return Err(format!("purl {purl:?} has empty coordinates")),
    };
    let group = namespace.map(|ns| ns.strip_prefix('@').map(str::to_owned).unwrap_or(ns));

    ComponentId::new(group.as_deref(), &name, &version, ecosystem).map_err(|e| e.to_string())
}

fn percent_decode(s: &str) -> Result<String, String> {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex_pair = bytes
                .get(i + 1..i + 3)
                .ok_or_else(|| format!("truncated percent escape in {s:?}"))?;
            let decoded = u8::from_str_radix(
                std::str::from_utf8(hex_pair).map_err(|_| format!("bad escape in {s:?}"))?,
                16,
            )
            .map_err(|_| format!("bad percent escape in {s:?}"))?;
            out.push(decoded);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).map_err(|_| format!("purl segment {s:?} is not UTF-8"))
}

/// Builds the committed set from a parsed SBOM: one `(H(canonical), canonical)`
/// entry per component, deduplicated and sorted by label. Order-insensitive
/// in the input.
pub fn to_datastore(sbom: &SbomDocument) -> Datastore {
    let pairs = sbom
        .components
        .iter()
        .map(|c| {
            let canonical = c.canonical();
            (crypto::hash(canonical.as_bytes()), canonical)
        })
        .collect();
    Datastore::from_pairs(pairs)
}

/// Builds a datastore directly from component ids (convenience for
/// synthetic inputs that never pass through a document).
pub fn components_to_datastore(components: &[ComponentId]) -> Datastore {
    let pairs = components
        .iter()
        .map(|c| {
            let canonical = c.canonical();
            (crypto::hash(canonical.as_bytes()), canonical)
        })
        .collect();
    Datastore::from_pairs(pairs)
}
