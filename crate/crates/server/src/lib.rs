//! HTTP control service for live persona steering.
//!
//! Routes:
//!
//! | method | path | body |
//! |---|---|---|
//! | GET | `/personas` | |
//! | GET | `/macros` | |
//! | POST | `/sessions` | |
//! | GET | `/sessions/{id}` | |
//! | POST | `/sessions/{id}/macro` | `{"macro_id": "stern", "x": 50}` |
//! | POST | `/sessions/{id}/active` | `{"persona_id": ".."}` or `{"a": "..", "b": "..", "alpha": 0.5}` |
//! | POST | `/sessions/{id}/synthesize` | `{"text": "..", "seed": 7}` (seed optional) |
//! | GET | `/sessions/{id}/curves/{feature}` | |
//! | GET | `/sessions/{id}/events` | server-sent events |
//!
//! Macros are applied to whatever the session has selected, so with a blend
//! active the blend is formed first and the macros act on the result.
//! Sessions live in memory only.

pub mod api;
pub mod error;

use std::net::SocketAddr;

pub use api::{router, AppState, MacroRequest, SessionView, SynthesizeRequest, SynthesizeResponse};
pub use error::ApiError;
use persona_core::PersonaBundle;

/// Binds `addr` and serves `bundle` until the process is stopped.
pub async fn serve(bundle: PersonaBundle, addr: SocketAddr) -> std::io::Result<()> {
    let state =
        AppState::new(bundle).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e.to_string()))?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}
