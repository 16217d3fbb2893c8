//! End-to-end harness for the SBOM privacy protocol: scenario definitions,
//! an in-process runner that instantiates every actor (supplier, operator,
//! transparency log, consumer) with direct calls, adversarial variants of
//! the protocol mapped to the threat model, and synthetic-SBOM performance
//! sweeps.
//!
//! The binaries in this crate front the harness (`zksbom-sim`), the
//! consumer checks (`zksbom-verify`), and the leakage analyzer
//! (`zksbom-leakage`).

pub mod perf;
pub mod scenario;

use thiserror::Error;

pub use perf::{run_perf_sweep, synthetic_sbom, PerfReport, PerfRow};
pub use scenario::{
    ground_truth, run_adversarial, run_happy_path, Adversary, Scenario, StepRecord, Transcript,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("fixture error: {0}")]
    Fixture(String),
    /// An honest run failed a check that honesty guarantees, or an attack
    /// went undetected — either way the harness itself found a protocol
    /// violation.
    #[error("protocol failure: {0}")]
    Protocol(String),
    #[error(transparent)]
    Operator(#[from] zksbom_operator::OperatorError),
    #[error(transparent)]
    Advisory(#[from] zksbom_core::advisory::AdvisoryError),
    #[error(transparent)]
    Tlog(#[from] zksbom_core::tlog::TlogError),
    #[error(transparent)]
    Sbom(#[from] zksbom_core::sbom::SbomError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
