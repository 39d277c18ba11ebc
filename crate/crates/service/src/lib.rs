//! Stateless HTTP API over the toolchain.
//!
//! | method | path               | body                                     |
//! |--------|--------------------|------------------------------------------|
//! | POST   | `/api/v1/validate` | `{"source":"dsl"\|"json","text":str}`    |
//! | POST   | `/api/v1/infer`    | `{"src":kind,"dst":kind}`                |
//! | GET    | `/api/v1/matrix`   |                                          |
//! | POST   | `/api/v1/format`   | `{"text":str}`                           |
//! | POST   | `/api/v1/render`   | `{"source","text","bm"?,"format"}`       |
//!
//! Every JSON response carries `ok`. The handlers are plain functions from
//! request text to [`Reply`]; [`router`] only adapts them to axum.

use std::net::SocketAddr;

use axum::extract::DefaultBodyLimit;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use bmc_core::diagnostic::WireDiagnostic;
use bmc_core::export::{parse_json_as, to_dot, to_json_value, to_svg};
use bmc_core::rules::RelationshipPolicy;
use bmc_core::{
    check_source, dsl, has_errors, select_business_model, Diagnostic, ElementKind, SourceFormat,
};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;
use tokio::net::TcpListener;

pub const DEFAULT_BODY_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServiceConfig {
    /// Largest accepted request body in bytes.
    pub body_limit: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            body_limit: DEFAULT_BODY_LIMIT,
        }
    }
}

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Serve(#[from] std::io::Error),
}

/// A finished response.
#[derive(Debug, Clone, PartialEq)]
pub struct Reply {
    pub status: u16,
    pub content_type: &'static str,
    pub body: String,
}

impl Reply {
    fn json(status: u16, value: Value) -> Reply {
        Reply {
            status,
            content_type: "application/json",
            body: value.to_string(),
        }
    }

    fn rejected(status: u16, diagnostics: &[Diagnostic]) -> Reply {
        Reply::json(status, json!({ "ok": false, "diagnostics": wire(diagnostics) }))
    }

    /// The body as JSON. Panics on non-JSON replies.
    pub fn json_body(&self) -> Value {
        serde_json::from_str(&self.body).expect("json reply")
    }
}

impl IntoResponse for Reply {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, [(header::CONTENT_TYPE, self.content_type)], self.body).into_response()
    }
}

fn wire(diagnostics: &[Diagnostic]) -> Vec<WireDiagnostic> {
    diagnostics.iter().map(Diagnostic::to_wire).collect()
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Source {
    #[default]
    Dsl,
    Json,
}

impl From<Source> for SourceFormat {
    fn from(s: Source) -> Self {
        match s {
            Source::Dsl => SourceFormat::Dsl,
            Source::Json => SourceFormat::Json,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValidateRequest {
    #[serde(default)]
    source: Source,
    text: String,
    #[serde(default = "yes")]
    lints: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InferRequest {
    src: String,
    dst: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormatRequest {
    text: String,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RenderFormat {
    Svg,
    Dot,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RenderRequest {
    #[serde(default)]
    source: Source,
    text: String,
    #[serde(default)]
    bm: Option<String>,
    format: RenderFormat,
}

fn request<T: serde::de::DeserializeOwned>(body: &str) -> Result<T, Reply> {
    parse_json_as(body).map_err(|d| Reply::rejected(400, &[d]))
}

/// `ok` is false iff there is an Error; `model` is included when ok.
pub fn validate(body: &str) -> Reply {
    let req: ValidateRequest = match request(body) {
        Ok(req) => req,
        Err(reply) => return reply,
    };
    let (enterprise, diagnostics) = check_source(&req.text, req.source.into(), req.lints);
    let ok = !has_errors(&diagnostics);
    let mut out = json!({ "ok": ok, "diagnostics": wire(&diagnostics) });
    if ok {
        out["model"] = to_json_value(&enterprise);
    }
    Reply::json(200, out)
}

pub fn infer(body: &str) -> Reply {
    let req: InferRequest = match request(body) {
        Ok(req) => req,
        Err(reply) => return reply,
    };
    let kind = |field: &str, token: &str| {
        ElementKind::from_token(token).ok_or_else(|| {
            Diagnostic::error(
                "E007",
                format!("schema violation at `$.{field}`: unknown element kind `{token}`"),
            )
        })
    };
    let (src, dst) = match (kind("src", &req.src), kind("dst", &req.dst)) {
        (Ok(src), Ok(dst)) => (src, dst),
        (src, dst) => {
            let diags: Vec<_> = [src.err(), dst.err()].into_iter().flatten().collect();
            return Reply::rejected(400, &diags);
        }
    };
    let entry = RelationshipPolicy::normative().entry(src, dst);
    Reply::json(
        200,
        json!({ "ok": true, "entry": entry.status(), "kind": entry.kind().verb() }),
    )
}

pub fn matrix() -> Reply {
    let entries: Vec<Value> = RelationshipPolicy::normative()
        .iter()
        .map(|(src, dst, entry)| {
            json!({
                "src": src.abbrev(),
                "dst": dst.abbrev(),
                "entry": entry.status(),
                "kind": entry.kind().verb(),
            })
        })
        .collect();
    Reply::json(200, json!({ "ok": true, "entries": entries }))
}

/// Canonical text, or the loading diagnostics when the text does not load
/// cleanly.
pub fn format(body: &str) -> Reply {
    let req: FormatRequest = match request(body) {
        Ok(req) => req,
        Err(reply) => return reply,
    };
    let (enterprise, diagnostics) = dsl::parse_source(&req.text);
    if has_errors(&diagnostics) {
        return Reply::json(200, json!({ "ok": false, "diagnostics": wire(&diagnostics) }));
    }
    Reply::json(
        200,
        json!({ "ok": true, "text": dsl::format(&enterprise), "diagnostics": [] }),
    )
}

/// The drawing itself, or 422 with diagnostics.
pub fn render(body: &str) -> Reply {
    let req: RenderRequest = match request(body) {
        Ok(req) => req,
        Err(reply) => return reply,
    };
    let (enterprise, diagnostics) = check_source(&req.text, req.source.into(), false);
    if has_errors(&diagnostics) {
        return Reply::rejected(422, &diagnostics);
    }
    let bm = match select_business_model(&enterprise, req.bm.as_deref()) {
        Ok(bm) => bm,
        Err(err) => {
            let d = Diagnostic::error("E007", format!("schema violation at `$.bm`: {err}"));
            return Reply::rejected(422, &[d]);
        }
    };
    match req.format {
        RenderFormat::Svg => Reply {
            status: 200,
            content_type: "image/svg+xml",
            body: to_svg(bm),
        },
        RenderFormat::Dot => Reply {
            status: 200,
            content_type: "text/vnd.graphviz",
            body: to_dot(bm),
        },
    }
}

pub fn router(config: ServiceConfig) -> Router {
    Router::new()
        .route("/api/v1/validate", post(|body: String| async move { validate(&body) }))
        .route("/api/v1/infer", post(|body: String| async move { infer(&body) }))
        .route("/api/v1/matrix", get(|| async { matrix() }))
        .route("/api/v1/format", post(|body: String| async move { format(&body) }))
        .route("/api/v1/render", post(|body: String| async move { render(&body) }))
        .layer(DefaultBodyLimit::max(config.body_limit))
}

pub async fn bind(addr: SocketAddr) -> Result<TcpListener, ServiceError> {
    TcpListener::bind(addr)
        .await
        .map_err(|source| ServiceError::Bind { addr, source })
}

/// Serves until the process ends.
pub async fn serve(listener: TcpListener, config: ServiceConfig) -> Result<(), ServiceError> {
    axum::serve(listener, router(config)).await?;
    Ok(())
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli-service.md")]
mod book {}
