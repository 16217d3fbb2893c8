//! Core library for privacy-preserving SBOM sharing.
//!
//! A software supplier uploads an SBOM to an operator, which commits to the
//! component set with a salted sparse Merkle tree. Consumers then ask
//! "is this artifact affected by CVE X?" and receive verifiable inclusion or
//! non-inclusion proofs for exactly the components the advisory names,
//! learning nothing else about the SBOM. Commitments are anchored in an
//! append-only verifiable map so that all consumers agree on one commitment
//! per artifact.
//!
//! Module map:
//!
//! - [`model`] — component identities, digests, datastores, verdicts
//! - [`crypto`] — the hash and signature primitives plus domain separation
//! - [`sbom`] — CycloneDX ingestion and datastore construction
//! - [`zks`] — commit / query / verify over the salted sparse Merkle tree
//! - [`tlog`] — the transparency log (verifiable map keyed by artifact hash)
//! - [`advisory`] — offline vulnerability advisory fixtures
//! - [`client`] — supplier- and consumer-side protocol steps
//! - [`leakage`] — expected-leakage model for inclusion/exclusion proofs
//!
//! All state is immutable after construction except [`tlog::LogState`],
//! which follows a single-writer append contract. With the default
//! `parallel` feature, tree construction and batch proving use rayon;
//! disabling it yields a dependency-free sequential build with identical
//! outputs.

pub mod advisory;
pub mod client;
pub mod crypto;
pub mod leakage;
pub mod model;
pub mod sbom;
pub mod tlog;
pub mod zks;
