//! Service binary: serve SBOM uploads and proof queries over HTTP.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;

use zksbom_core::advisory::AdvisoryDb;
use zksbom_operator::http::{router, AppState};
use zksbom_operator::Operator;

/// SBOM privacy operator: accepts CycloneDX uploads, commits to their
/// component sets, and answers CVE queries with (non-)inclusion proofs.
#[derive(Parser)]
#[command(name = "zksbom-operator", version)]
struct Args {
    /// Address to listen on.
    #[arg(long, default_value = "127.0.0.1:8080")]
    listen: SocketAddr,

    /// Directory holding commitment record files (created if absent).
    #[arg(long)]
    store_dir: PathBuf,

    /// Advisory fixture (JSON) used to resolve CVE ids.
    #[arg(long)]
    advisories: PathBuf,
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let advisories = Arc::new(AdvisoryDb::load(&args.advisories)?);
    let operator = Arc::new(Operator::open(&args.store_dir)?);
    let app = router(AppState {
        operator,
        advisories,
    });

    let listener = tokio::net::TcpListener::bind(args.listen).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app).await?;
    Ok(())
}
