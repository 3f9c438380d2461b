//! HTTP front end for the gateway.

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Router;
use vrcaptcha_core::gateway::wire::{route, MAX_BODY_BYTES};
use vrcaptcha_core::gateway::Gateway;

use crate::error::Result;

/// How often expired sessions are swept.
pub const SWEEP_INTERVAL: Duration = Duration::from_secs(30);

async fn handle(State(gw): State<Arc<Gateway>>, method: Method, uri: Uri, body: Bytes) -> Response {
    let out = tokio::task::spawn_blocking(move || route(&gw, method.as_str(), uri.path(), &body))
        .await
        .expect("request handler panicked");
    let status = StatusCode::from_u16(out.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, "application/json")], out.body).into_response()
}

/// Every request goes through [`route`]; axum only moves bytes.
pub fn router(gw: Arc<Gateway>) -> Router {
    Router::new()
        .fallback(handle)
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .with_state(gw)
}

/// Binds `addr` and serves until Ctrl-C.
pub async fn serve(gw: Arc<Gateway>, addr: SocketAddr) -> Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    serve_until(gw, listener, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}

/// Serves on `listener` until `shutdown` resolves, sweeping expired
/// sessions periodically.
pub async fn serve_until(
    gw: Arc<Gateway>,
    listener: tokio::net::TcpListener,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> Result<()> {
    let sweeper = Arc::clone(&gw);
    let sweep = tokio::spawn(async move {
        let mut tick = tokio::time::interval(SWEEP_INTERVAL);
        loop {
            tick.tick().await;
            sweeper.sweep_expired(sweeper.now());
        }
    });
    let served = axum::serve(listener, router(gw)).with_graceful_shutdown(shutdown).await;
    sweep.abort();
    Ok(served?)
}
