use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use softcat::fixtures;
use softcat_service::{router, ServiceConfig};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (status, text) = call_text(app, method, uri, body).await;
    (status, serde_json::from_str(&text).unwrap_or(Value::Null))
}

async fn call_text(
    app: &Router,
    method: &str,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, String) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(match body {
            Some(v) => Body::from(v.to_string()),
            None => Body::empty(),
        })
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn doc(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn cookbook_body() -> Value {
    json!({
        "categories": doc(fixtures::GENERATIVE_CATEGORIES_JSON),
        "graph": doc(fixtures::COOKBOOK_GRAPH_JSON),
        "seeds": doc(fixtures::COOKBOOK_SEEDS_JSON),
    })
}

async fn new_session(app: &Router) -> String {
    let (status, body) = call(app, "POST", "/sessions", Some(cookbook_body())).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["id"].as_str().unwrap().to_string()
}

fn candidates_of(view: &Value, unit: &str) -> Value {
    view["units"]
        .as_array()
        .unwrap()
        .iter()
        .find(|u| u["unit"] == unit)
        .unwrap()["candidates"]
        .clone()
}

#[tokio::test]
async fn full_round_trip() {
    let app = router(ServiceConfig::default());
    let id = new_session(&app).await;

    let (status, report) = call(&app, "POST", &format!("/sessions/{id}/propagate"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["iteration"], 1);

    let (_, view) = call(&app, "GET", &format!("/sessions/{id}/state"), None).await;
    assert_eq!(candidates_of(&view, fixtures::AUTHOR), json!(["DG"]));
    assert_eq!(
        candidates_of(&view, fixtures::COOKBOOK_PANEL),
        json!(["DT"])
    );
    assert_eq!(view["conflicts"], json!([]));

    let (status, body) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/assign"),
        Some(json!({"unit": fixtures::READER, "category": "0'"})),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "CategoryNotInCandidates");
    assert_eq!(body["detail"]["candidates"], json!(["D", "DG", "DT", "T"]));

    let (status, _) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/assign"),
        Some(json!({"unit": fixtures::READER, "category": "T"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    call(&app, "POST", &format!("/sessions/{id}/propagate"), None).await;
    let (_, view) = call(&app, "GET", &format!("/sessions/{id}/state"), None).await;
    assert_eq!(
        candidates_of(&view, fixtures::COOKBOOK_READER),
        json!(["DT"])
    );

    let (status, report) = call(&app, "GET", &format!("/sessions/{id}/candidates"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["specific"], json!(["D"]));

    let (status, report) = call(
        &app,
        "GET",
        &format!("/sessions/{id}/candidates?specific=T"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["closure"], json!(["DT", "T"]));

    let (status, steps) = call(
        &app,
        "GET",
        &format!("/sessions/{id}/explain?unit={}", fixtures::AUTHOR),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(steps.as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn undo_restores_previous_export_byte_for_byte() {
    let app = router(ServiceConfig::default());
    let id = new_session(&app).await;
    call(&app, "POST", &format!("/sessions/{id}/propagate"), None).await;
    let (_, before) = call_text(&app, "GET", &format!("/sessions/{id}/export"), None).await;
    call(
        &app,
        "POST",
        &format!("/sessions/{id}/assign"),
        Some(json!({"unit": fixtures::READER, "category": "T"})),
    )
    .await;
    call(&app, "POST", &format!("/sessions/{id}/propagate"), None).await;
    call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    let (_, after) = call_text(&app, "GET", &format!("/sessions/{id}/export"), None).await;
    assert_eq!(before, after);

    call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    let (status, body) = call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "NothingToUndo");
}

#[tokio::test]
async fn error_statuses() {
    let app = router(ServiceConfig::default());
    let (status, body) = call(&app, "GET", "/sessions/missing/state", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "SessionNotFound");

    let mut bad = cookbook_body();
    bad["categories"]["refinements"]
        .as_array_mut()
        .unwrap()
        .push(json!({"child": "DG", "parent": "DT"}));
    let (status, body) = call(&app, "POST", "/sessions", Some(bad)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "CycleDetected");

    let (status, body) = call(&app, "POST", "/sessions", Some(json!({"graph": 1}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "ParseError");

    let id = new_session(&app).await;
    let (status, body) = call(&app, "GET", &format!("/sessions/{id}/violations"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "IncompleteAssignment");

    let (status, body) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/assign"),
        Some(json!({"unit": "lib.Nope", "category": "D"})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "UnknownUnit");

    let (status, body) = call(
        &app,
        "GET",
        &format!("/sessions/{id}/candidates?specific=Q"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "UnknownId");
}

#[tokio::test]
async fn conflicts_surface_in_state() {
    let app = router(ServiceConfig::default());
    let body = json!({
        "categories": doc(fixtures::GENERATIVE_CATEGORIES_JSON),
        "graph": doc(fixtures::CONFLICT_GRAPH_JSON),
        "seeds": doc(fixtures::CONFLICT_SEEDS_JSON),
    });
    let (_, created) = call(&app, "POST", "/sessions", Some(body)).await;
    let id = created["id"].as_str().unwrap();
    let (_, report) = call(&app, "POST", &format!("/sessions/{id}/propagate"), None).await;
    assert_eq!(report["newly_conflicted"], json!(["X"]));
    let (_, view) = call(&app, "GET", &format!("/sessions/{id}/state"), None).await;
    assert_eq!(view["conflicts"], json!(["X"]));
}

#[tokio::test]
async fn concurrent_mutations_are_serialized() {
    let app = router(ServiceConfig::default());
    let id = new_session(&app).await;
    let tasks: Vec<_> = (0..8)
        .map(|_| {
            let app = app.clone();
            let uri = format!("/sessions/{id}/propagate");
            tokio::spawn(async move { call(&app, "POST", &uri, None).await })
        })
        .collect();
    let mut iterations = Vec::new();
    for task in tasks {
        let (status, report) = task.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        iterations.push(report["iteration"].as_u64().unwrap());
    }
    iterations.sort();
    assert_eq!(iterations, (1..=8).collect::<Vec<u64>>());
    let (_, view) = call(&app, "GET", &format!("/sessions/{id}/state"), None).await;
    assert_eq!(view["history_depth"], 9);
}

#[tokio::test]
async fn serves_ui_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<h1>ui</h1>").unwrap();
    let app = router(ServiceConfig {
        ui_dir: Some(dir.path().to_path_buf()),
        persist_dir: None,
    });
    let (status, body) = call_text(&app, "GET", "/index.html", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, "<h1>ui</h1>");
}
