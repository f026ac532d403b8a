use std::collections::HashMap;
use std::convert::Infallible;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use futures::stream::{self, Stream, StreamExt};
use persona_core::render::SourceFilterRenderer;
use persona_core::session::PreparedSynthesis;
use persona_core::{Active, CurvePair, FeatureSample, Macro, Persona, PersonaBundle, RenderBackend, SessionState};
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast;

use crate::error::ApiError;

/// Pending push messages per session before slow subscribers start lagging.
const EVENT_BUFFER: usize = 64;

struct Slot {
    state: Mutex<SessionState>,
    events: broadcast::Sender<String>,
}

/// Shared service state: the bundle and every live session.
#[derive(Clone)]
pub struct AppState {
    bundle: Arc<PersonaBundle>,
    sessions: Arc<RwLock<HashMap<String, Arc<Slot>>>>,
}

impl AppState {
    pub fn new(bundle: PersonaBundle) -> Result<Self, persona_core::Error> {
        bundle.validate().into_result()?;
        Ok(Self {
            bundle: Arc::new(bundle),
            sessions: Arc::new(RwLock::new(HashMap::new())),
        })
    }

    pub fn bundle(&self) -> &PersonaBundle {
        &self.bundle
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ApiError> {
        self.sessions
            .read()
            .expect("session table poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::UnknownSession(id.to_string()))
    }

    /// Runs `f` on the current state under the session lock. On success the
    /// result replaces the state and is pushed to subscribers; on error the
    /// state is left as it was.
    fn mutate<F>(&self, id: &str, f: F) -> Result<SessionView, ApiError>
    where
        F: FnOnce(&SessionState) -> persona_core::Result<SessionState>,
    {
        let slot = self.slot(id)?;
        let mut guard = slot.state.lock().expect("session poisoned");
        let next = f(&guard)?;
        let view = SessionView::of(&next)?;
        *guard = next;
        publish(&slot, &PushEvent::State { state: &view });
        Ok(view)
    }
}

/// Session state as the API reports it, with the effective persona attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub session_id: String,
    pub active: Active,
    pub macro_values: std::collections::BTreeMap<String, f64>,
    pub seed_counter: u64,
    pub effective: Persona,
}

impl SessionView {
    fn of(s: &SessionState) -> persona_core::Result<Self> {
        Ok(Self {
            session_id: s.session_id.clone(),
            active: s.active.clone(),
            macro_values: s.macro_values.clone(),
            seed_counter: s.seed_counter,
            effective: s.effective_persona()?,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacroRequest {
    pub macro_id: String,
    pub x: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesizeRequest {
    pub text: String,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthesizeResponse {
    /// Mono 16-bit PCM WAV file, base64.
    pub audio_wav_base64: String,
    pub sample_rate: u32,
    pub duration_seconds: f64,
    pub seed: u64,
    pub sample: FeatureSample,
    pub effective: Persona,
}

/// Messages on the push channel, one JSON object per event.
#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum PushEvent<'a> {
    State { state: &'a SessionView },
    Synthesized { seed: u64, sample: &'a FeatureSample },
}

fn publish(slot: &Slot, event: &PushEvent<'_>) {
    let text = serde_json::to_string(event).expect("events serialize");
    // No subscribers is not an error.
    let _ = slot.events.send(text);
}

type JsonBody<T> = Result<Json<T>, JsonRejection>;

/// The full route table.
pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/personas", get(list_personas))
        .route("/macros", get(list_macros))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/macro", post(set_macro))
        .route("/sessions/{id}/active", post(select_active))
        .route("/sessions/{id}/synthesize", post(synthesize))
        .route("/sessions/{id}/curves/{feature}", get(curves))
        .route("/sessions/{id}/events", get(events))
        .with_state(state)
}

async fn list_personas(State(app): State<AppState>) -> Json<Vec<Persona>> {
    Json(app.bundle.personas.clone())
}

async fn list_macros(State(app): State<AppState>) -> Json<Vec<Macro>> {
    Json(app.bundle.macros.clone())
}

async fn create_session(State(app): State<AppState>) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let state = SessionState::create(Arc::clone(&app.bundle))?;
    let view = SessionView::of(&state)?;
    let (events, _) = broadcast::channel(EVENT_BUFFER);
    let slot = Arc::new(Slot {
        state: Mutex::new(state),
        events,
    });
    app.sessions
        .write()
        .expect("session table poisoned")
        .insert(view.session_id.clone(), slot);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let slot = app.slot(&id)?;
    let state = slot.state.lock().expect("session poisoned").clone();
    Ok(Json(SessionView::of(&state)?))
}

async fn set_macro(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: JsonBody<MacroRequest>,
) -> Result<Json<SessionView>, ApiError> {
    let Json(req) = body?;
    app.mutate(&id, |s| s.set_macro(&req.macro_id, req.x)).map(Json)
}

async fn select_active(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: JsonBody<Active>,
) -> Result<Json<SessionView>, ApiError> {
    let Json(active) = body?;
    app.mutate(&id, |s| s.select_active(active)).map(Json)
}

/// Draws under the session lock (which also advances the seed counter), then
/// renders the snapshot on a blocking thread with the lock released.
async fn synthesize(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: JsonBody<SynthesizeRequest>,
) -> Result<Json<SynthesizeResponse>, ApiError> {
    let Json(req) = body?;
    let slot = app.slot(&id)?;
    let (prepared, view) = {
        let mut guard = slot.state.lock().expect("session poisoned");
        let (prepared, next) = guard.prepare_synthesis(&req.text, req.seed)?;
        let view = SessionView::of(&next)?;
        *guard = next;
        (prepared, view)
    };
    publish(&slot, &PushEvent::State { state: &view });

    let PreparedSynthesis {
        request,
        effective,
        seed,
    } = prepared;
    let (request, audio) = tokio::task::spawn_blocking(move || {
        let audio = SourceFilterRenderer.render(&request);
        (request, audio)
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))?;
    let audio = audio?;
    let wav = audio.to_wav_bytes()?;
    publish(
        &slot,
        &PushEvent::Synthesized {
            seed,
            sample: &request.sample,
        },
    );
    Ok(Json(SynthesizeResponse {
        audio_wav_base64: STANDARD.encode(wav),
        sample_rate: audio.sample_rate,
        duration_seconds: audio.duration_seconds(),
        seed,
        sample: request.sample,
        effective,
    }))
}

async fn curves(
    State(app): State<AppState>,
    Path((id, feature)): Path<(String, String)>,
) -> Result<Json<CurvePair>, ApiError> {
    let slot = app.slot(&id)?;
    let state = slot.state.lock().expect("session poisoned").clone();
    Ok(Json(state.get_curves(&feature)?))
}

/// Server-sent events: the current state first, then every change.
async fn events(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Sse<impl Stream<Item = Result<Event, Infallible>>>, ApiError> {
    let slot = app.slot(&id)?;
    let (rx, first) = {
        let guard = slot.state.lock().expect("session poisoned");
        // Subscribe while holding the lock so no change slips between the
        // snapshot and the subscription.
        let rx = slot.events.subscribe();
        let view = SessionView::of(&guard)?;
        let first = serde_json::to_string(&PushEvent::State { state: &view }).expect("events serialize");
        (rx, first)
    };
    let updates = stream::unfold(rx, |mut rx| async move {
        loop {
            match rx.recv().await {
                Ok(text) => return Some((text, rx)),
                Err(broadcast::error::RecvError::Lagged(_)) => continue,
                Err(broadcast::error::RecvError::Closed) => return None,
            }
        }
    });
    let all = stream::once(async move { first })
        .chain(updates)
        .map(|text| Ok(Event::default().data(text)));
    Ok(Sse::new(all).keep_alive(KeepAlive::default()))
}
