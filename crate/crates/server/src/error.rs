use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use evotrace::store::StoreError;
use evotrace::Error;
use serde::Serialize;

/// Error payload: `{"error": {"status", "kind", "message"}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub kind: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        Self { status, kind, message: message.into() }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn unknown_run(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "unknown_run", format!("no run named {id:?}"))
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::NotFound(_) => Self::new(StatusCode::NOT_FOUND, "unknown_individual", message),
            Error::OutOfRange(_) => Self::new(StatusCode::NOT_FOUND, "out_of_range", message),
            Error::Contract(_) | Error::UnsupportedProblem(_) => Self::bad_request(message),
            Error::Cancelled => Self::new(StatusCode::SERVICE_UNAVAILABLE, "cancelled", message),
            Error::InvalidLog(_) | Error::Store(StoreError::Invalid(_)) => {
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "invalid_run", message)
            }
            Error::Store(_) => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "store", message),
        }
    }
}

#[derive(Serialize)]
struct Body<'a> {
    error: Inner<'a>,
}

#[derive(Serialize)]
struct Inner<'a> {
    status: u16,
    kind: &'a str,
    message: &'a str,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Body { error: Inner { status: self.status.as_u16(), kind: self.kind, message: &self.message } };
        (self.status, Json(body)).into_response()
    }
}
