//! JSON API over a candidate set and its review sessions.
//!
//! All routes live under `/api`. Every failure answers with an
//! [`ApiError`] body.

mod error;
mod state;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::{json, Value};
use smellval_core::catalog::{evaluate_evidence, items_for, EvidenceResult, ValidationItem};
use smellval_core::detector::{explain, SmellCandidate};
use smellval_core::review::{
    agreement, create_session, session_stats, Argument, CandidateEntry, Decision, ItemAnswer,
    RecordOutcome, Verdict,
};
use smellval_core::source::locate;
use smellval_core::SmellKind;
use tower_http::services::ServeDir;

pub use error::{ApiError, ApiResult};
pub use state::AppState;

type Shared = Arc<AppState>;

/// Builds the router. With `static_dir`, non-API paths serve files from it.
pub fn router(state: Shared, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/candidates", get(list_candidates))
        .route("/candidates/{id}", get(candidate_detail))
        .route("/source", get(source_lines))
        .route("/sessions", get(list_sessions).post(new_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/answers", post(post_answer))
        .route("/sessions/{id}/verdicts", post(post_verdict))
        .route("/reports/stats", get(stats_report))
        .route("/reports/agreement", get(agreement_report))
        .fallback(|| async { ApiError::not_found("no_route", "no such endpoint") })
        .with_state(state);
    let app = Router::new().nest("/api", api);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.fallback(|| async { ApiError::not_found("no_route", "no such endpoint") }),
    }
}

pub async fn serve(addr: SocketAddr, app: Router) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app).await?;
    Ok(())
}

/// Bodies are parsed by hand so malformed input still gets an `ApiError`.
fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(ApiError::bad_body)
}

fn find_candidate<'a>(state: &'a AppState, id: &str) -> ApiResult<&'a SmellCandidate> {
    state
        .candidates
        .find(id)
        .ok_or_else(|| ApiError::not_found("unknown_candidate", format!("unknown candidate `{id}`")))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CandidateView<'a> {
    #[serde(flatten)]
    candidate: &'a SmellCandidate,
    explanation: String,
}

#[derive(Deserialize)]
struct CandidateQuery {
    smell: Option<String>,
}

async fn list_candidates(
    State(st): State<Shared>,
    Query(q): Query<CandidateQuery>,
) -> ApiResult<Json<Value>> {
    let smell: Option<SmellKind> = match q.smell.as_deref() {
        Some(s) => Some(
            s.parse()
                .map_err(|e: smellval_core::smell::UnknownSmellKind| ApiError::unprocessable("unknown_smell", e.to_string()))?,
        ),
        None => None,
    };
    let views: Vec<CandidateView> = st
        .candidates
        .candidates
        .iter()
        .filter(|c| smell.is_none_or(|s| c.smell == s))
        .map(|c| CandidateView { candidate: c, explanation: explain(c) })
        .collect();
    Ok(Json(json!({ "count": views.len(), "candidates": views })))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ItemView {
    item: &'static ValidationItem,
    evidence: Option<EvidenceResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evidence_error: Option<String>,
}

async fn candidate_detail(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let c = find_candidate(&st, &id)?;
    let stale = st.model.find_entity(&c.entity).is_none();
    let items: Vec<ItemView> = items_for(c.smell)
        .into_iter()
        .map(|item| match evaluate_evidence(&st.model, c, item, &st.candidates.config) {
            Ok(ev) => ItemView { item, evidence: Some(ev), evidence_error: None },
            Err(e) => ItemView { item, evidence: None, evidence_error: Some(e.to_string()) },
        })
        .collect();
    Ok(Json(json!({
        "candidate": c,
        "explanation": explain(c),
        "stale": stale,
        "items": items,
    })))
}

#[derive(Deserialize)]
struct SourceQuery {
    path: String,
    from: Option<u32>,
    to: Option<u32>,
}

async fn source_lines(State(st): State<Shared>, Query(q): Query<SourceQuery>) -> ApiResult<Json<Value>> {
    // Only files that belong to the scanned project are served.
    let unknown = || ApiError::not_found("unknown_file", format!("`{}` is not a project file", q.path));
    if !st.model.units.iter().any(|u| u.path == q.path) {
        return Err(unknown());
    }
    let file = locate(&st.candidates.root_paths(), &q.path).ok_or_else(unknown)?;
    let bytes = std::fs::read(&file).map_err(|e| ApiError::internal(e.to_string()))?;
    let text = String::from_utf8_lossy(&bytes);
    let lines: Vec<&str> = text.lines().collect();
    let total = lines.len() as u32;
    let from = q.from.unwrap_or(1);
    let to = q.to.unwrap_or(total);
    if from < 1 || from > to || to > total {
        return Err(ApiError::unprocessable(
            "bad_range",
            format!("range {from}-{to} is outside 1-{total}"),
        ));
    }
    let out: Vec<Value> = (from..=to)
        .map(|n| json!({ "number": n, "text": lines[(n - 1) as usize] }))
        .collect();
    Ok(Json(json!({
        "path": q.path,
        "from": from,
        "to": to,
        "totalLines": total,
        "lines": out,
    })))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct NewSession {
    reviewer_id: String,
    candidate_ids: Option<Vec<String>>,
}

async fn new_session(State(st): State<Shared>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let req: NewSession = parse_body(&body)?;
    if req.reviewer_id.trim().is_empty() {
        return Err(ApiError::unprocessable("invalid_body", "reviewerId must not be empty"));
    }
    let entries: Vec<CandidateEntry> = match &req.candidate_ids {
        Some(ids) => ids
            .iter()
            .map(|id| find_candidate(&st, id).map(CandidateEntry::from))
            .collect::<ApiResult<_>>()?,
        None => st.candidates.candidates.iter().map(CandidateEntry::from).collect(),
    };
    let (session, warnings) = create_session(&entries, req.reviewer_id.trim())?;
    st.insert(session.clone())?;
    Ok((StatusCode::CREATED, Json(json!({ "session": session, "warnings": warnings }))))
}

async fn list_sessions(State(st): State<Shared>) -> Json<Value> {
    let rows: Vec<Value> = st
        .all_sessions()
        .iter()
        .map(|s| {
            json!({
                "sessionId": s.session_id,
                "reviewerId": s.reviewer_id,
                "total": s.candidate_set.len(),
                "pending": s.pending_count(),
                "updatedAt": s.updated_at,
            })
        })
        .collect();
    Json(json!({ "sessions": rows }))
}

async fn get_session(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = st.session(&id)?;
    let next = s.next_pending().map(|c| c.id.clone());
    Ok(Json(json!({ "session": s, "nextCandidateId": next })))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct AnswerBody {
    candidate_id: String,
    item_id: String,
    answer: ItemAnswer,
}

async fn post_answer(
    State(st): State<Shared>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let req: AnswerBody = parse_body(&body)?;
    st.mutate(&id, |s| Ok(s.record_answer(&req.candidate_id, &req.item_id, req.answer)?))?;
    Ok(Json(json!({ "ok": true })))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ArgumentBody {
    Text(String),
    Full { text: String },
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct VerdictBody {
    candidate_id: String,
    decision: Decision,
    #[serde(default)]
    arguments: Vec<ArgumentBody>,
    #[serde(default)]
    unjustified: bool,
    idempotency_key: Option<String>,
}

async fn post_verdict(
    State(st): State<Shared>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let req: VerdictBody = parse_body(&body)?;
    let arguments = req
        .arguments
        .into_iter()
        .map(|a| match a {
            ArgumentBody::Text(t) | ArgumentBody::Full { text: t } => t,
        })
        .filter(|t| !t.trim().is_empty())
        .map(Argument::new)
        .collect();
    let verdict = Verdict {
        decision: req.decision,
        arguments,
        unjustified: req.unjustified,
    };
    let (outcome, pending, next) = st.mutate(&id, |s| {
        let outcome = s.record_verdict(&req.candidate_id, verdict, req.idempotency_key.as_deref())?;
        Ok((outcome, s.pending_count(), s.next_pending().map(|c| c.id.clone())))
    })?;
    let outcome = match outcome {
        RecordOutcome::Recorded => "recorded",
        RecordOutcome::Duplicate => "duplicate",
    };
    Ok(Json(json!({ "outcome": outcome, "pending": pending, "nextCandidateId": next })))
}

async fn stats_report(State(st): State<Shared>) -> Json<Value> {
    Json(json!({ "stats": session_stats(&st.all_sessions()) }))
}

async fn agreement_report(State(st): State<Shared>) -> ApiResult<Json<Value>> {
    let reports = agreement(&st.all_sessions())?;
    let scoped: Vec<Value> = reports
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).unwrap_or(Value::Null);
            v["scope"] = json!(r.scope());
            v
        })
        .collect();
    Ok(Json(json!({ "reports": scoped })))
}
