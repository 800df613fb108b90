use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use smellval_core::detector::{detect, CandidateFile, DetectionConfig};
use smellval_core::source::load_project;
use smellval_server::{router, AppState};
use tower::ServiceExt;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/corpus").canonicalize().unwrap()
}

struct Fixture {
    _dir: tempfile::TempDir,
    sessions: PathBuf,
    candidates: CandidateFile,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let sessions = dir.path().join("sessions");
        let model = load_project(&[corpus()]).unwrap();
        let cfg = DetectionConfig::default();
        let found = detect(&model, &cfg);
        let candidates = CandidateFile::new(vec![corpus().display().to_string()], cfg, found);
        Self { _dir: dir, sessions, candidates }
    }

    fn app(&self) -> Router {
        let model = self.candidates.load_model().unwrap();
        let state = AppState::new(self.candidates.clone(), model, &self.sessions).unwrap();
        router(Arc::new(state), None)
    }
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

fn assert_api_error(status: StatusCode, body: &Value, code: &str) {
    assert_eq!(body["httpStatus"], status.as_u16(), "{body}");
    assert_eq!(body["code"], code, "{body}");
    assert!(body["message"].as_str().is_some_and(|m| !m.is_empty()));
}

async fn start_session(app: &Router, reviewer: &str) -> String {
    let (status, v) = call(app, "POST", "/api/sessions", Some(&json!({ "reviewerId": reviewer }).to_string())).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["session"]["sessionId"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn candidate_listing_and_filter() {
    let fx = Fixture::new();
    let app = fx.app();
    let (status, v) = call(&app, "GET", "/api/candidates", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["count"], fx.candidates.candidates.len());
    assert!(v["candidates"][0]["explanation"].as_str().unwrap().contains("suspected in"));

    let (status, v) = call(&app, "GET", "/api/candidates?smell=LPL", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(v["candidates"].as_array().unwrap().iter().all(|c| c["smell"] == "LongParameterList"));

    let (status, v) = call(&app, "GET", "/api/candidates?smell=Blob", None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_api_error(status, &v, "unknown_smell");
}

#[tokio::test]
async fn candidate_detail_carries_items_and_evidence() {
    let fx = Fixture::new();
    let app = fx.app();
    let c = fx.candidates.candidates.iter().find(|c| c.smell.item_prefix() == "DC").unwrap();
    let (status, v) = call(&app, "GET", &format!("/api/candidates/{}", c.id), None).await;
    assert_eq!(status, StatusCode::OK);
    let items = v["items"].as_array().unwrap();
    assert_eq!(items.len(), 3);
    assert_eq!(items[0]["item"]["id"], "DC-1");
    assert_eq!(items[0]["evidence"]["finding"], "no");
    assert_eq!(v["stale"], false);

    let (status, v) = call(&app, "GET", "/api/candidates/ffffffffffffffff", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(status, &v, "unknown_candidate");
}

#[tokio::test]
async fn source_excerpts() {
    let fx = Fixture::new();
    let app = fx.app();
    let c = &fx.candidates.candidates[0];
    let uri = format!(
        "/api/source?path={}&from={}&to={}",
        c.file, c.source_span.start, c.source_span.end
    );
    let (status, v) = call(&app, "GET", &uri, None).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["lines"].as_array().unwrap().len(), c.source_span.len() as usize);
    assert_eq!(v["lines"][0]["number"], c.source_span.start);

    let (status, v) = call(&app, "GET", "/api/source?path=../../Cargo.toml", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(status, &v, "unknown_file");

    let (status, v) = call(&app, "GET", &format!("/api/source?path={}&from=5&to=2", c.file), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_api_error(status, &v, "bad_range");
}

#[tokio::test]
async fn verdict_flow_and_validation() {
    let fx = Fixture::new();
    let app = fx.app();
    let sid = start_session(&app, "alice").await;
    assert!(fx.sessions.join(format!("{sid}.json")).is_file());
    let cid = fx.candidates.candidates[0].id.clone();
    let url = format!("/api/sessions/{sid}/verdicts");

    let (status, v) = call(&app, "POST", &url, Some(&json!({ "candidateId": cid, "decision": "accept" }).to_string())).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_api_error(status, &v, "missing_arguments");

    let body = json!({ "candidateId": cid, "decision": "accept", "arguments": ["too big", {"text": "mixed concerns"}], "idempotencyKey": "k1" }).to_string();
    let (status, v) = call(&app, "POST", &url, Some(&body)).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["outcome"], "recorded");
    assert_eq!(v["pending"], fx.candidates.candidates.len() - 1);
    let (_, v) = call(&app, "POST", &url, Some(&body)).await;
    assert_eq!(v["outcome"], "duplicate");

    let (status, v) = call(&app, "GET", &format!("/api/sessions/{sid}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["session"]["history"].as_array().unwrap().len(), 1);
    assert_eq!(v["session"]["verdicts"][&cid]["arguments"].as_array().unwrap().len(), 2);

    let (status, v) = call(&app, "POST", &url, Some(&json!({ "candidateId": "nope", "decision": "skip" }).to_string())).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(status, &v, "unknown_candidate");

    let (status, v) = call(&app, "POST", &url, Some("{ not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_api_error(status, &v, "malformed_json");

    let (status, v) = call(&app, "POST", &url, Some(&json!({ "candidateId": cid, "decision": "maybe" }).to_string())).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_api_error(status, &v, "invalid_body");

    let (status, v) = call(&app, "POST", "/api/sessions/none/verdicts", Some(&body)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(status, &v, "unknown_session");
}

#[tokio::test]
async fn answers_are_checked() {
    let fx = Fixture::new();
    let app = fx.app();
    let sid = start_session(&app, "bob").await;
    let c = fx.candidates.candidates.iter().find(|c| c.smell.item_prefix() == "LPL").unwrap();
    let url = format!("/api/sessions/{sid}/answers");
    let ok = json!({ "candidateId": c.id, "itemId": "LPL-5", "answer": "unsure" }).to_string();
    let (status, _) = call(&app, "POST", &url, Some(&ok)).await;
    assert_eq!(status, StatusCode::OK);
    let bad = json!({ "candidateId": c.id, "itemId": "GC-1", "answer": "yes" }).to_string();
    let (status, v) = call(&app, "POST", &url, Some(&bad)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_api_error(status, &v, "invalid_item");
}

#[tokio::test]
async fn external_edit_is_a_conflict() {
    let fx = Fixture::new();
    let app = fx.app();
    let sid = start_session(&app, "carol").await;
    let path = fx.sessions.join(format!("{sid}.json"));
    let text = std::fs::read_to_string(&path).unwrap().replace("carol", "mallory");
    std::fs::write(&path, text).unwrap();
    let cid = &fx.candidates.candidates[0].id;
    let body = json!({ "candidateId": cid, "decision": "reject", "unjustified": true }).to_string();
    let (status, v) = call(&app, "POST", &format!("/api/sessions/{sid}/verdicts"), Some(&body)).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_api_error(status, &v, "session_conflict");
}

#[tokio::test]
async fn reports_and_restart() {
    let fx = Fixture::new();
    let app = fx.app();
    let (status, v) = call(&app, "GET", "/api/reports/agreement", None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_api_error(status, &v, "too_few_sessions");

    for (who, decision) in [("r1", "accept"), ("r2", "accept"), ("r3", "reject")] {
        let sid = start_session(&app, who).await;
        for (i, c) in fx.candidates.candidates.iter().enumerate() {
            let d = if i % 2 == 0 { "accept" } else { decision };
            let body = json!({ "candidateId": c.id, "decision": d, "arguments": ["because"] }).to_string();
            let (status, _) = call(&app, "POST", &format!("/api/sessions/{sid}/verdicts"), Some(&body)).await;
            assert_eq!(status, StatusCode::OK);
        }
    }
    let n = fx.candidates.candidates.len();
    let (status, v) = call(&app, "GET", "/api/reports/stats", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["stats"]["validations"], 3 * n);
    assert_eq!(v["stats"]["argumentsTotal"], 3 * n);

    let (status, v) = call(&app, "GET", "/api/reports/agreement", None).await;
    assert_eq!(status, StatusCode::OK);
    let all = v["reports"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(all["scope"], "all");
    assert_eq!(all["raters"], 3);
    assert_eq!(all["subjects"], n);
    let k = all["kappa"].as_f64().unwrap();
    assert!((-1.0..=1.0).contains(&k));

    // A fresh server over the same directory sees the same sessions.
    let again = fx.app();
    let (_, v) = call(&again, "GET", "/api/sessions", None).await;
    assert_eq!(v["sessions"].as_array().unwrap().len(), 3);
    assert!(v["sessions"].as_array().unwrap().iter().all(|s| s["pending"] == 0));
}

#[tokio::test]
async fn unknown_routes_use_the_error_body() {
    let fx = Fixture::new();
    let app = fx.app();
    let (status, v) = call(&app, "GET", "/api/nothing", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(status, &v, "no_route");
}
