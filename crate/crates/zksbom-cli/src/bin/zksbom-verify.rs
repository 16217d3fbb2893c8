//! Consumer-side verification commands.
//!
//! Exit codes for `proofs`: 0 = NotAffected, 1 = Affected, 2 = Invalid or
//! any error. `publication` exits 0 when the log entry and signature check
//! out, 2 otherwise.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use zksbom_core::advisory::AdvisoryDb;
use zksbom_core::client::{self, ProofResponse};
use zksbom_core::crypto::PublicKey;
use zksbom_core::model::{Digest, VerdictKind};
use zksbom_core::tlog::LogState;
use zksbom_core::zks::Commitment;

/// Verify operator proofs and transparency-log publications.
#[derive(Parser)]
#[command(name = "zksbom-verify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an artifact's publication: log inclusion under a trusted
    /// digest, plus the supplier's signature over the binding.
    Publication {
        /// The artifact file whose hash keys the log entry.
        #[arg(long)]
        artifact: PathBuf,
        /// Directory holding the transparency log (`entries.log`,
        /// `digests.log`).
        #[arg(long)]
        log: PathBuf,
        /// Trusted log digest, 64 hex characters.
        #[arg(long)]
        digest: String,
        /// File holding the supplier's public key as hex text.
        #[arg(long)]
        pubkey: PathBuf,
    },
    /// Verify an operator proof response for one CVE and print the verdict.
    Proofs {
        /// Commitment root, 64 hex characters.
        #[arg(long)]
        commitment: String,
        /// CVE id the proofs are expected to answer.
        #[arg(long)]
        cve: String,
        /// JSON proof response file, as returned by the operator.
        #[arg(long)]
        proofs: PathBuf,
        /// Advisory fixture used to re-resolve the CVE independently.
        #[arg(long)]
        advisories: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Publication {
            artifact,
            log,
            digest,
            pubkey,
        } => {
            let artifact_bytes =
                fs::read(&artifact).map_err(|e| format!("{}: {e}", artifact.display()))?;
            let log_state = LogState::load(&log).map_err(|e| e.to_string())?;
            let trusted = Digest::from_hex(digest.trim()).map_err(|e| e.to_string())?;
            let pk_text =
                fs::read_to_string(&pubkey).map_err(|e| format!("{}: {e}", pubkey.display()))?;
            let pk = PublicKey::from_hex(pk_text.trim())
                .ok_or_else(|| "malformed public key hex".to_string())?;

            let (ok, commitment) =
                client::consumer_check_publication(&artifact_bytes, &trusted, &log_state, &pk);
            match commitment {
                Some(c) if ok => {
                    println!("publication verified: commitment {}", c.root.to_hex());
                    Ok(ExitCode::SUCCESS)
                }
                _ => {
                    println!("publication check FAILED");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Proofs {
            commitment,
            cve,
            proofs,
            advisories,
        } => {
            let root = Digest::from_hex(commitment.trim()).map_err(|e| e.to_string())?;
            let body =
                fs::read(&proofs).map_err(|e| format!("{}: {e}", proofs.display()))?;
            let response: ProofResponse =
                serde_json::from_slice(&body).map_err(|e| format!("proofs file: {e}"))?;
            if response.cve != cve {
                return Err(format!(
                    "proofs file answers {:?}, not {cve:?}",
                    response.cve
                ));
            }
            let db = AdvisoryDb::load(&advisories).map_err(|e| e.to_string())?;

            let verdict = client::consumer_verify_proofs(
                &Commitment::new(root),
                &cve,
                &response.proofs,
                &db,
            )
            .map_err(|e| e.to_string())?;
            println!("{cve}: {:?} — {}", verdict.kind, verdict.detail);
            Ok(match verdict.kind {
                VerdictKind::NotAffected => ExitCode::SUCCESS,
                VerdictKind::Affected => ExitCode::from(1),
                VerdictKind::Invalid => ExitCode::from(2),
            })
        }
    }
}
