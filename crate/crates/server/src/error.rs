//! Uniform error body for every non-2xx response.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

use smellval_core::review::{AgreementError, SessionError};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiError {
    pub http_status: u16,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            http_status: status.as_u16(),
            code,
            message: message.into(),
        }
    }

    pub fn not_found(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, code, message)
    }

    pub fn unprocessable(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, code, message)
    }

    pub fn conflict(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, code, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }

    pub fn bad_body(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => Self::unprocessable("invalid_body", e.to_string()),
            _ => Self::new(StatusCode::BAD_REQUEST, "malformed_json", e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.http_status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let msg = e.to_string();
        match e {
            SessionError::UnknownCandidate(_) => Self::not_found("unknown_candidate", msg),
            SessionError::InvalidItem { .. } => Self::unprocessable("invalid_item", msg),
            SessionError::MissingArguments => Self::unprocessable("missing_arguments", msg),
            SessionError::DiscardedWithCodes => Self::unprocessable("invalid_body", msg),
            SessionError::UnknownArgument { .. } => Self::not_found("unknown_argument", msg),
            SessionError::EmptyCandidateSet => Self::unprocessable("empty_candidate_set", msg),
            SessionError::SchemaVersion(_) | SessionError::Parse(_) | SessionError::Io { .. } => {
                Self::internal(msg)
            }
        }
    }
}

impl From<AgreementError> for ApiError {
    fn from(e: AgreementError) -> Self {
        let msg = e.to_string();
        match e {
            AgreementError::TooFewSessions(_) => Self::unprocessable("too_few_sessions", msg),
            AgreementError::DisjointCandidateSets(..) => Self::conflict("disjoint_candidate_sets", msg),
        }
    }
}

pub type ApiResult<T> = Result<T, ApiError>;
