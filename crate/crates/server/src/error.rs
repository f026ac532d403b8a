use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use persona_core::{Error, ValidationReport};
use serde::Serialize;

/// Everything a handler can fail with. Rendered as a JSON body.
#[derive(Debug)]
pub enum ApiError {
    UnknownSession(String),
    Core(Error),
    BadRequest { status: StatusCode, message: String },
    Internal(String),
}

#[derive(Serialize)]
struct Body<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    violations: Option<&'a ValidationReport>,
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ApiError::Core(e) => match e {
                Error::UnknownMacro(_) | Error::UnknownPersona(_) | Error::UnknownFeature(_) => StatusCode::NOT_FOUND,
                Error::Validation(_)
                | Error::Domain { .. }
                | Error::InvalidArgument(_)
                | Error::Incomparable(_)
                | Error::EmptyBundle => StatusCode::UNPROCESSABLE_ENTITY,
                _ => StatusCode::INTERNAL_SERVER_ERROR,
            },
            ApiError::BadRequest { status, .. } => *status,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            ApiError::UnknownSession(_) => "unknown-session",
            ApiError::Core(e) => match e {
                Error::Validation(_) => "validation",
                Error::Incomparable(_) => "incomparable",
                Error::UnknownMacro(_) => "unknown-macro",
                Error::UnknownPersona(_) => "unknown-persona",
                Error::UnknownFeature(_) => "unknown-feature",
                Error::Domain { .. } => "domain",
                Error::InvalidArgument(_) => "invalid-argument",
                Error::EmptyBundle => "empty-bundle",
                _ => "internal",
            },
            ApiError::BadRequest { .. } => "bad-request",
            ApiError::Internal(_) => "internal",
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError::Core(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::BadRequest {
            status: r.status(),
            message: r.body_text(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let message = match &self {
            ApiError::UnknownSession(id) => format!("no session {id}"),
            ApiError::Core(e) => e.to_string(),
            ApiError::BadRequest { message, .. } | ApiError::Internal(message) => message.clone(),
        };
        let violations = match &self {
            ApiError::Core(Error::Validation(r)) => Some(r),
            _ => None,
        };
        let body = Body {
            error: self.kind(),
            message,
            violations,
        };
        (self.status(), Json(body)).into_response()
    }
}
