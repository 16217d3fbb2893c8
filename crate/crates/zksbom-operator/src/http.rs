//! HTTP facade over [`Operator`](crate::Operator).
//!
//! `POST /api/v1/sbom` — body: CycloneDX JSON → `{"commitment", "seed"}`.
//! `GET /api/v1/proof?commitment=<hex>&cve=<id>` → `{"cve", "proofs": [...]}`.
//! Malformed input maps to 400, unknown commitment or CVE to 404.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use zksbom_core::advisory::{AdvisoryDb, AdvisoryError};
use zksbom_core::client::ProofResponse;
use zksbom_core::model::Digest;
use zksbom_core::zks::Commitment;

use crate::{Operator, OperatorError};

#[derive(Clone)]
pub struct AppState {
    pub operator: Arc<Operator>,
    pub advisories: Arc<AdvisoryDb>,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/v1/sbom", post(upload_sbom))
        .route("/api/v1/proof", get(proof))
        .with_state(state)
}

async fn upload_sbom(State(app): State<AppState>, body: Bytes) -> Response {
    match app.operator.upload_sbom(&body) {
        Ok((commitment, seed)) => Json(json!({
            "commitment": commitment.root.to_hex(),
            "seed": seed.to_hex(),
        }))
        .into_response(),
        Err(err) => error_response(err),
    }
}

#[derive(Deserialize)]
struct ProofParams {
    commitment: String,
    cve: String,
}

async fn proof(State(app): State<AppState>, Query(params): Query<ProofParams>) -> Response {
    let root = match Digest::from_hex(&params.commitment) {
        Ok(root) => root,
        Err(e) => {
            return (
                StatusCode::BAD_REQUEST,
                Json(json!({ "error": format!("malformed commitment: {e}") })),
            )
                .into_response();
        }
    };
    match app
        .operator
        .query_vulnerability(&Commitment::new(root), &params.cve, &app.advisories)
    {
        Ok(proofs) => Json(ProofResponse {
            cve: params.cve,
            proofs,
        })
        .into_response(),
        Err(err) => error_response(err),
    }
}

fn error_response(err: OperatorError) -> Response {
    let status = match &err {
        OperatorError::Malformed(_) => StatusCode::BAD_REQUEST,
        OperatorError::UnknownCommitment(_) => StatusCode::NOT_FOUND,
        OperatorError::Advisory(AdvisoryError::UnknownCve(_)) => StatusCode::NOT_FOUND,
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    };
    (status, Json(json!({ "error": err.to_string() }))).into_response()
}
