//! HTTP facade over the TRPN engine.
//!
//! | Method | Path | |
//! |---|---|---|
//! | GET, POST | `/projects` | list, create from a project document |
//! | GET, PUT, DELETE | `/projects/{id}` | PUT takes `{"version", "project"}` |
//! | GET | `/projects/{id}/analysis` | machine report of the current version |
//! | GET, POST | `/projects/{id}/scenarios` | POST takes `{"id"?, "version"?, "actions"}` |
//! | GET | `/projects/{id}/scenarios/compare?a=&b=` | `base` names the project itself |
//! | GET, DELETE | `/projects/{id}/scenarios/{sid}` | |
//!
//! Errors are JSON objects with `error` and `message`: 400 for invalid input (with
//! `issues`), 404 for unknown ids, 409 for stale versions, 422 for a degenerate network.

mod error;
mod store;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use trpn_core::io::project_to_json;
use trpn_core::TreatmentAction;

pub use error::ApiError;
pub use store::{Created, ProjectSummary, ScenarioSnapshot, Store, BASE};

/// Header carrying the project version a response was computed from.
pub const VERSION_HEADER: &str = "x-project-version";

type Shared = Arc<Store>;

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/projects", get(list_projects).post(create_project))
        .route(
            "/projects/{id}",
            get(get_project).put(update_project).delete(delete_project),
        )
        .route("/projects/{id}/analysis", get(get_analysis))
        .route("/projects/{id}/scenarios", get(list_scenarios).post(create_scenario))
        .route("/projects/{id}/scenarios/compare", get(compare))
        .route(
            "/projects/{id}/scenarios/{sid}",
            get(get_scenario).delete(delete_scenario),
        )
        .with_state(store)
}

/// Serves until ctrl-c.
pub async fn serve(addr: SocketAddr, store: Arc<Store>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn parse_json<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed request body: {e}")))
}

fn body_text(body: &Bytes) -> Result<&str, ApiError> {
    std::str::from_utf8(body).map_err(|_| ApiError::bad_request("request body is not UTF-8"))
}

fn with_version(mut response: Response, version: u64) -> Response {
    response
        .headers_mut()
        .insert(VERSION_HEADER, HeaderValue::from(version));
    response
}

fn project_value(p: &trpn_core::ProjectDefinition) -> Value {
    serde_json::from_str(&project_to_json(p)).expect("project document is JSON")
}

fn scenario_json(s: &ScenarioSnapshot) -> Value {
    let mut v = json!({ "id": s.id, "project_version": s.version, "actions": s.actions });
    match &s.outcome {
        Ok(doc) => v["report"] = serde_json::to_value(&**doc).expect("report serializes"),
        Err(e) => v["error"] = e.body(),
    }
    v
}

async fn list_projects(State(store): State<Shared>) -> Json<Vec<ProjectSummary>> {
    Json(store.list())
}

async fn create_project(State(store): State<Shared>, body: Bytes) -> Result<Response, ApiError> {
    let created = store.create(body_text(&body)?)?;
    let version = created.version;
    Ok(with_version(
        (StatusCode::CREATED, Json(created)).into_response(),
        version,
    ))
}

async fn get_project(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let snap = store.get(&id)?;
    let body = json!({ "id": id, "version": snap.version, "project": project_value(&snap.project) });
    Ok(with_version(Json(body).into_response(), snap.version))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UpdateRequest {
    version: u64,
    project: Value,
}

async fn update_project(
    State(store): State<Shared>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: UpdateRequest = parse_json(&body)?;
    let updated = store.update(&id, req.version, &req.project.to_string())?;
    let version = updated.version;
    Ok(with_version(Json(updated).into_response(), version))
}

async fn delete_project(State(store): State<Shared>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    store.delete(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

/// The engine's machine report, byte for byte as the CLI writes it.
async fn get_analysis(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let (doc, version) = store.analysis(&id)?;
    let response = ([(header::CONTENT_TYPE, "application/json")], doc.to_json()).into_response();
    Ok(with_version(response, version))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioRequest {
    id: Option<String>,
    version: Option<u64>,
    actions: Vec<TreatmentAction>,
}

async fn create_scenario(
    State(store): State<Shared>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: ScenarioRequest = parse_json(&body)?;
    let snap = store.add_scenario(&id, req.id, req.version, req.actions)?;
    let version = snap.version;
    Ok(with_version(
        (StatusCode::CREATED, Json(scenario_json(&snap))).into_response(),
        version,
    ))
}

async fn list_scenarios(State(store): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let (list, version) = store.scenarios(&id)?;
    let items: Vec<Value> = list
        .iter()
        .map(|s| {
            json!({
                "id": s.id,
                "actions": s.actions.len(),
                "ok": s.outcome.is_ok(),
            })
        })
        .collect();
    Ok(with_version(Json(items).into_response(), version))
}

async fn get_scenario(
    State(store): State<Shared>,
    Path((id, sid)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let snap = store.scenario(&id, &sid)?;
    Ok(with_version(Json(scenario_json(&snap)).into_response(), snap.version))
}

async fn delete_scenario(
    State(store): State<Shared>,
    Path((id, sid)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let version = store.delete_scenario(&id, &sid)?;
    Ok(with_version(StatusCode::NO_CONTENT.into_response(), version))
}

#[derive(Deserialize)]
struct CompareQuery {
    a: String,
    b: String,
}

async fn compare(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Query(q): Query<CompareQuery>,
) -> Result<Response, ApiError> {
    Ok(Json(store.compare(&id, &q.a, &q.b)?).into_response())
}
