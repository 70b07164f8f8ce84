//! HTTP session API for interactive categorization.
//!
//! A session holds one lattice, one dependency graph and a history of
//! inference snapshots. The expert drives it round by round:
//!
//! | method | path | effect |
//! |---|---|---|
//! | `POST` | `/sessions` | create from `{categories, graph, seeds}` |
//! | `GET` | `/sessions/{id}/state` | candidates, tiers, conflicts, last diff |
//! | `POST` | `/sessions/{id}/propagate` | run to fixpoint |
//! | `POST` | `/sessions/{id}/assign` | `{unit, category, force?}` |
//! | `POST` | `/sessions/{id}/undo` | drop the latest snapshot |
//! | `GET` | `/sessions/{id}/candidates` | generation candidates, `?specific=D,T` |
//! | `GET` | `/sessions/{id}/violations` | forbidden edges of a total assignment |
//! | `GET` | `/sessions/{id}/explain?unit=` | narrowing steps for one unit |
//! | `GET` | `/sessions/{id}/export` | self-contained state document |
//!
//! Errors are `{"error": <code>, "detail": ...}` with a 4xx status.

mod session;

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use softcat::report;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

pub use session::{
    ApiError, AssignRequest, CreateRequest, CreatedView, Session, SessionStore, StateView, UnitView,
};

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Static files served under `/`, typically the browser UI.
    pub ui_dir: Option<PathBuf>,
    /// Each session's export is rewritten here after every mutation.
    pub persist_dir: Option<PathBuf>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (
            status,
            [(header::CONTENT_TYPE, "application/json")],
            self.body(),
        )
            .into_response()
    }
}

fn json<T: Serialize>(status: StatusCode, value: &T) -> Response {
    (
        status,
        [(header::CONTENT_TYPE, "application/json")],
        report::to_json(value),
    )
        .into_response()
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError {
        status: 400,
        code: "ParseError".into(),
        detail: e.to_string().into(),
    })
}

type Store = Arc<SessionStore>;

async fn create(State(store): State<Store>, body: Bytes) -> Result<Response, ApiError> {
    let created = store.create(parse_body(&body)?)?;
    Ok(json(StatusCode::CREATED, &created))
}

async fn state(State(store): State<Store>, Path(id): Path<String>) -> Result<Response, ApiError> {
    Ok(json(StatusCode::OK, &store.state(&id)?))
}

async fn propagate(
    State(store): State<Store>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    Ok(json(StatusCode::OK, &store.propagate(&id).await?))
}

async fn assign(
    State(store): State<Store>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    Ok(json(
        StatusCode::OK,
        &store.assign(&id, parse_body(&body)?).await?,
    ))
}

async fn undo(State(store): State<Store>, Path(id): Path<String>) -> Result<Response, ApiError> {
    Ok(json(StatusCode::OK, &store.undo(&id).await?))
}

#[derive(Deserialize)]
struct SpecificQuery {
    specific: Option<String>,
}

async fn candidates(
    State(store): State<Store>,
    Path(id): Path<String>,
    Query(query): Query<SpecificQuery>,
) -> Result<Response, ApiError> {
    let ids: Option<Vec<&str>> = query.specific.as_deref().map(|s| {
        s.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect()
    });
    Ok(json(
        StatusCode::OK,
        &store.candidates(&id, ids.as_deref())?,
    ))
}

async fn violations(
    State(store): State<Store>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    Ok(json(StatusCode::OK, &store.violations(&id)?))
}

#[derive(Deserialize)]
struct UnitQuery {
    unit: String,
}

async fn explain(
    State(store): State<Store>,
    Path(id): Path<String>,
    Query(query): Query<UnitQuery>,
) -> Result<Response, ApiError> {
    Ok(json(StatusCode::OK, &store.explain(&id, &query.unit)?))
}

async fn export(State(store): State<Store>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let body = store.export(&id)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], body).into_response())
}

pub fn router(config: ServiceConfig) -> Router {
    let store = Arc::new(SessionStore::new(config.persist_dir));
    let api = Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}/state", get(state))
        .route("/sessions/{id}/propagate", post(propagate))
        .route("/sessions/{id}/assign", post(assign))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/candidates", get(candidates))
        .route("/sessions/{id}/violations", get(violations))
        .route("/sessions/{id}/explain", get(explain))
        .route("/sessions/{id}/export", get(export))
        .with_state(store);
    let api = match config.ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    api.layer(CorsLayer::permissive())
}

/// Serves until the process receives Ctrl-C.
pub async fn serve(
    listener: tokio::net::TcpListener,
    config: ServiceConfig,
) -> std::io::Result<()> {
    axum::serve(listener, router(config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
