//! Drives one cookbook session through the HTTP API without opening a socket.
//!
//! Mirrors what the browser UI does: create, propagate, inspect the diff,
//! assign by hand, propagate again, then fetch candidates.

use axum::body::Body;
use axum::http::Request;
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use softcat::fixtures;
use softcat_service::{router, ServiceConfig};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> Value {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value: Value = serde_json::from_slice(&bytes).unwrap();
    println!("{method} {uri} -> {status}");
    value
}

#[tokio::main]
async fn main() {
    let app = router(ServiceConfig::default());
    let doc = |text: &str| serde_json::from_str::<Value>(text).unwrap();
    let created = call(
        &app,
        "POST",
        "/sessions",
        Some(json!({
            "categories": doc(fixtures::GENERATIVE_CATEGORIES_JSON),
            "graph": doc(fixtures::COOKBOOK_GRAPH_JSON),
            "seeds": doc(fixtures::COOKBOOK_SEEDS_JSON),
        })),
    )
    .await;
    let id = created["id"].as_str().unwrap();
    let base = format!("/sessions/{id}");

    call(&app, "POST", &format!("{base}/propagate"), None).await;
    let state = call(&app, "GET", &format!("{base}/state"), None).await;
    for change in state["last_diff"].as_array().unwrap() {
        println!(
            "  {} {} -> {}",
            change["unit"], change["before"], change["after"]
        );
    }

    let rejected = call(
        &app,
        "POST",
        &format!("{base}/assign"),
        Some(json!({"unit": fixtures::READER, "category": "0'"})),
    )
    .await;
    println!(
        "  {}: {}",
        rejected["error"], rejected["detail"]["candidates"]
    );

    call(
        &app,
        "POST",
        &format!("{base}/assign"),
        Some(json!({"unit": fixtures::READER, "category": "T"})),
    )
    .await;
    call(&app, "POST", &format!("{base}/propagate"), None).await;

    let report = call(&app, "GET", &format!("{base}/candidates"), None).await;
    for entry in report["units"].as_array().unwrap() {
        if entry["tier"] == "definite" {
            println!("  candidate {} {}", entry["unit"], entry["candidates"]);
        }
    }
    let violations = call(&app, "GET", &format!("{base}/violations"), None).await;
    println!("  violations: {}", violations["violations"]);
}
