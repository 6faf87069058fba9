//! HTTP service that keeps Mathpar sessions alive between requests.
//!
//! Each session owns an [`Env`]; requests against one session are applied
//! one at a time, while different sessions evaluate concurrently.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use mathpar::{join_cells, split_cells, CellReport, Env, Span};
use serde::{Deserialize, Serialize};

pub const MAX_BODY_BYTES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub port: u16,
    pub session_ttl: Duration,
    pub max_sessions: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            port: 8377,
            session_ttl: Duration::from_secs(60 * 60),
            max_sessions: 256,
        }
    }
}

impl Config {
    /// Reads `MATHPAR_PORT`, `MATHPAR_SESSION_TTL_MINUTES` and
    /// `MATHPAR_MAX_SESSIONS` through `var`, falling back to defaults.
    pub fn from_vars(var: impl Fn(&str) -> Option<String>) -> Result<Self, String> {
        fn parse<T: std::str::FromStr>(name: &str, value: Option<String>) -> Result<Option<T>, String> {
            value
                .map(|v| v.trim().parse().map_err(|_| format!("invalid {name}: `{v}`")))
                .transpose()
        }
        let mut config = Config::default();
        if let Some(port) = parse("MATHPAR_PORT", var("MATHPAR_PORT"))? {
            config.port = port;
        }
        if let Some(minutes) = parse::<u64>("MATHPAR_SESSION_TTL_MINUTES", var("MATHPAR_SESSION_TTL_MINUTES"))? {
            config.session_ttl = Duration::from_secs(minutes * 60);
        }
        if let Some(max) = parse("MATHPAR_MAX_SESSIONS", var("MATHPAR_MAX_SESSIONS"))? {
            config.max_sessions = max;
        }
        Ok(config)
    }

    pub fn from_env() -> Result<Self, String> {
        Self::from_vars(|name| std::env::var(name).ok())
    }
}

/// Source of the current time for session expiry.
pub trait Clock: Send + Sync {
    fn now(&self) -> Instant;
}

pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Instant {
        Instant::now()
    }
}

/// A clock that only moves when told to.
pub struct ManualClock {
    start: Instant,
    offset: Mutex<Duration>,
}

impl ManualClock {
    pub fn new() -> Self {
        ManualClock {
            start: Instant::now(),
            offset: Mutex::new(Duration::ZERO),
        }
    }

    pub fn advance(&self, by: Duration) {
        *self.offset.lock().unwrap() += by;
    }
}

impl Default for ManualClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for ManualClock {
    fn now(&self) -> Instant {
        self.start + *self.offset.lock().unwrap()
    }
}

struct SessionState {
    env: Env,
    cells: usize,
}

struct Session {
    created_at: Instant,
    last_used: Mutex<Instant>,
    state: Arc<tokio::sync::Mutex<SessionState>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StoreError {
    SessionNotFound(String),
    CapacityExceeded(usize),
}

/// Live sessions keyed by id.
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Session>>>,
    ttl: Duration,
    max_sessions: usize,
    clock: Arc<dyn Clock>,
}

impl SessionStore {
    pub fn new(config: &Config, clock: Arc<dyn Clock>) -> Self {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            ttl: config.session_ttl,
            max_sessions: config.max_sessions,
            clock,
        }
    }

    fn expired(&self, session: &Session, now: Instant) -> bool {
        now.saturating_duration_since(*session.last_used.lock().unwrap()) > self.ttl
    }

    pub fn create(&self) -> Result<String, StoreError> {
        let now = self.clock.now();
        let mut sessions = self.sessions.write().unwrap();
        sessions.retain(|_, s| !self.expired(s, now));
        if sessions.len() >= self.max_sessions {
            return Err(StoreError::CapacityExceeded(self.max_sessions));
        }
        let id = uuid::Uuid::new_v4().to_string();
        sessions.insert(
            id.clone(),
            Arc::new(Session {
                created_at: now,
                last_used: Mutex::new(now),
                state: Arc::new(tokio::sync::Mutex::new(SessionState {
                    env: Env::new(),
                    cells: 0,
                })),
            }),
        );
        Ok(id)
    }

    fn lookup(&self, id: &str) -> Result<Arc<Session>, StoreError> {
        let now = self.clock.now();
        let found = self.sessions.read().unwrap().get(id).cloned();
        match found {
            Some(s) if !self.expired(&s, now) => {
                *s.last_used.lock().unwrap() = now;
                Ok(s)
            }
            Some(_) => {
                let mut sessions = self.sessions.write().unwrap();
                if sessions.get(id).is_some_and(|s| self.expired(s, now)) {
                    sessions.remove(id);
                }
                Err(StoreError::SessionNotFound(id.to_string()))
            }
            None => Err(StoreError::SessionNotFound(id.to_string())),
        }
    }

    pub fn contains(&self, id: &str) -> bool {
        self.lookup(id).is_ok()
    }

    /// Time since the session was created.
    pub fn age(&self, id: &str) -> Result<Duration, StoreError> {
        let s = self.lookup(id)?;
        Ok(self.clock.now().saturating_duration_since(s.created_at))
    }

    pub fn remove(&self, id: &str) -> Result<(), StoreError> {
        self.lookup(id)?;
        self.sessions.write().unwrap().remove(id);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Evaluates one cell; callers on the same session queue behind each
    /// other.
    pub async fn eval(&self, id: &str, source: String) -> Result<CellReport, StoreError> {
        let session = self.lookup(id)?;
        let mut state = session.state.clone().lock_owned().await;
        let report = tokio::task::spawn_blocking(move || {
            let result = state.env.eval_cell(&source);
            let report = CellReport::new(state.cells, &result);
            state.cells += 1;
            report
        })
        .await
        .expect("evaluation task panicked");
        Ok(report)
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub span: Option<Span>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: code.to_string(),
                message: message.into(),
                span: None,
            },
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::SessionNotFound(id) => {
                ApiError::new(StatusCode::NOT_FOUND, "SessionNotFound", format!("no session `{id}`"))
            }
            StoreError::CapacityExceeded(max) => ApiError::new(
                StatusCode::SERVICE_UNAVAILABLE,
                "CapacityExceeded",
                format!("the limit of {max} sessions is reached"),
            ),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        if r.status() == StatusCode::PAYLOAD_TOO_LARGE {
            ApiError::new(
                StatusCode::PAYLOAD_TOO_LARGE,
                "PayloadTooLarge",
                format!("request bodies are limited to {MAX_BODY_BYTES} bytes"),
            )
        } else {
            ApiError::new(StatusCode::BAD_REQUEST, "InvalidRequest", r.body_text())
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Serialize, Deserialize)]
pub struct SessionCreated {
    pub id: String,
}

#[derive(Serialize, Deserialize)]
pub struct EvalRequest {
    pub source: String,
}

#[derive(Serialize, Deserialize)]
pub struct SplitRequest {
    pub text: String,
}

#[derive(Serialize, Deserialize)]
pub struct Cells {
    pub cells: Vec<String>,
}

#[derive(Serialize, Deserialize)]
pub struct Text {
    pub text: String,
}

type Shared = Arc<SessionStore>;

async fn create_session(State(store): State<Shared>) -> Result<(StatusCode, Json<SessionCreated>), ApiError> {
    let id = store.create()?;
    Ok((StatusCode::CREATED, Json(SessionCreated { id })))
}

async fn delete_session(State(store): State<Shared>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    store.remove(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn eval(
    State(store): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<EvalRequest>, JsonRejection>,
) -> Result<Json<CellReport>, ApiError> {
    store.lookup(&id)?;
    let Json(req) = body?;
    Ok(Json(store.eval(&id, req.source).await?))
}

async fn split(
    State(store): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<SplitRequest>, JsonRejection>,
) -> Result<Json<Cells>, ApiError> {
    store.lookup(&id)?;
    let Json(req) = body?;
    Ok(Json(Cells {
        cells: split_cells(&req.text),
    }))
}

async fn join(body: Result<Json<Cells>, JsonRejection>) -> Result<Json<Text>, ApiError> {
    let Json(req) = body?;
    Ok(Json(Text {
        text: join_cells(&req.cells),
    }))
}

async fn healthz() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", delete(delete_session))
        .route("/sessions/{id}/eval", post(eval))
        .route("/sessions/{id}/document/split", post(split))
        .route("/document/join", post(join))
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .with_state(store)
}

/// Router over a fresh store using the system clock.
pub fn app(config: &Config) -> Router {
    router(Arc::new(SessionStore::new(config, Arc::new(SystemClock))))
}
