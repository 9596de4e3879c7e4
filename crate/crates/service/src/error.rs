use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::{json, Value};
use trpn_core::io::LoadError;
use trpn_core::scenario::ScenarioError;
use trpn_core::{AnalysisError, EngineError, Issue};

#[derive(Debug, Clone, thiserror::Error)]
pub enum ApiError {
    #[error("{message}")]
    BadRequest { message: String, issues: Vec<Issue> },
    #[error("{0} not found")]
    NotFound(String),
    #[error("version conflict: current version is {current}")]
    Conflict { current: u64 },
    #[error("scenario {0:?} already exists")]
    Exists(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("storage: {0}")]
    Storage(String),
}

impl ApiError {
    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::BadRequest {
            message: message.into(),
            issues: Vec::new(),
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            Self::BadRequest { .. } => StatusCode::BAD_REQUEST,
            Self::NotFound(_) => StatusCode::NOT_FOUND,
            Self::Conflict { .. } | Self::Exists(_) => StatusCode::CONFLICT,
            Self::Degenerate(_) => StatusCode::UNPROCESSABLE_ENTITY,
            Self::Storage(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            Self::BadRequest { .. } => "invalid",
            Self::NotFound(_) => "not_found",
            Self::Conflict { .. } => "version_conflict",
            Self::Exists(_) => "already_exists",
            Self::Degenerate(_) => "degenerate_network",
            Self::Storage(_) => "storage",
        }
    }

    pub fn body(&self) -> Value {
        let mut body = json!({ "error": self.code(), "message": self.to_string() });
        match self {
            Self::BadRequest { issues, .. } => {
                body["issues"] = issues.iter().map(issue_json).collect();
            }
            Self::Conflict { current } => body["current_version"] = json!(current),
            _ => {}
        }
        body
    }
}

fn issue_json(issue: &Issue) -> Value {
    let mut v = serde_json::to_value(issue).expect("issue serializes");
    v["message"] = json!(issue.kind.to_string());
    v
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.body())).into_response()
    }
}

impl From<LoadError> for ApiError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Invalid(v) => Self::BadRequest {
                message: "project is invalid".into(),
                issues: v.errors,
            },
            other => Self::bad_request(other.to_string()),
        }
    }
}

impl From<AnalysisError> for ApiError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Invalid(v) => Self::BadRequest {
                message: "project is invalid".into(),
                issues: v.errors,
            },
            AnalysisError::Engine(e @ EngineError::DegenerateNetwork(_)) => Self::Degenerate(e.to_string()),
            AnalysisError::Engine(e) => Self::bad_request(e.to_string()),
        }
    }
}

impl From<ScenarioError> for ApiError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Analysis(e) => e.into(),
            other => Self::bad_request(other.to_string()),
        }
    }
}
