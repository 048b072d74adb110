use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::{Mutex, RwLock};
use serde::Deserialize;
use serde_json::{json, Value};

use super::session::{ExplorerError, MoveRequest, Session};
use crate::search::{SearchOptions, SearchResult};

pub const DEFAULT_TTL: Duration = Duration::from_secs(3600);

/// Rule applications allowed per auto-run request.
const AUTO_STEP_CAP: u64 = 10_000_000;

struct Entry {
    session: Arc<Mutex<Session>>,
    last_used: Mutex<Instant>,
}

/// In-memory sessions, evicted after `ttl` without use. Each session is
/// behind its own lock, so requests on one session are serialized while
/// different sessions proceed independently.
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Entry>>,
    ttl: Duration,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> SessionStore {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            ttl,
        }
    }

    pub fn insert(&self, session: Session) -> String {
        self.evict_expired();
        let id = session.id().to_string();
        self.sessions.write().insert(
            id.clone(),
            Entry {
                session: Arc::new(Mutex::new(session)),
                last_used: Mutex::new(Instant::now()),
            },
        );
        id
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ExplorerError> {
        let sessions = self.sessions.read();
        let entry = sessions
            .get(id)
            .filter(|e| e.last_used.lock().elapsed() < self.ttl)
            .ok_or_else(|| ExplorerError::UnknownSession(id.to_string()))?;
        *entry.last_used.lock() = Instant::now();
        Ok(Arc::clone(&entry.session))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn evict_expired(&self) {
        let ttl = self.ttl;
        self.sessions
            .write()
            .retain(|_, e| e.last_used.lock().elapsed() < ttl);
    }
}

impl Default for SessionStore {
    fn default() -> Self {
        SessionStore::new(DEFAULT_TTL)
    }
}

struct ApiError(ExplorerError);

impl From<ExplorerError> for ApiError {
    fn from(e: ExplorerError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, kind) = match &self.0 {
            ExplorerError::Parse(_) => (StatusCode::BAD_REQUEST, "parse"),
            ExplorerError::UnknownSession(_) => (StatusCode::NOT_FOUND, "unknown_session"),
            ExplorerError::UnknownNode(_) => (StatusCode::NOT_FOUND, "unknown_node"),
            ExplorerError::NotOpen(_) => (StatusCode::CONFLICT, "not_open"),
            ExplorerError::Stale { .. } => (StatusCode::CONFLICT, "stale"),
            ExplorerError::IllegalMove { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "illegal_move"),
            ExplorerError::NothingToUndo => (StatusCode::CONFLICT, "nothing_to_undo"),
            ExplorerError::Search(_) => (StatusCode::UNPROCESSABLE_ENTITY, "search"),
        };
        let mut body = json!({ "error": self.0.to_string(), "kind": kind });
        if let ExplorerError::Parse(e) = &self.0 {
            body["offset"] = e.offset.into();
        }
        (status, Json(body)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

#[derive(Deserialize)]
struct CreateRequest {
    formula: String,
    #[serde(default = "yes")]
    prune0: bool,
}

fn yes() -> bool {
    true
}

fn to_value<T: serde::Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("view serialises")
}

async fn create(State(store): State<Arc<SessionStore>>, Json(req): Json<CreateRequest>) -> Result<(StatusCode, Json<Value>), ApiError> {
    let mut session = Session::new(&req.formula)?;
    session.set_prune0(req.prune0);
    let tree = to_value(session.tree());
    let id = store.insert(session);
    Ok((StatusCode::CREATED, Json(json!({ "id": id, "tree": tree }))))
}

async fn tree(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult {
    let session = store.get(&id)?;
    let tree = session.lock().tree();
    Ok(Json(to_value(tree)))
}

async fn moves(State(store): State<Arc<SessionStore>>, Path((id, node)): Path<(String, u64)>) -> ApiResult {
    let session = store.get(&id)?;
    let s = session.lock();
    let moves = s.list_moves(node)?;
    Ok(Json(json!({ "id": node, "revision": s.revision(), "moves": moves })))
}

async fn apply(
    State(store): State<Arc<SessionStore>>,
    Path((id, node)): Path<(String, u64)>,
    Json(req): Json<MoveRequest>,
) -> ApiResult {
    let session = store.get(&id)?;
    let result = session.lock().apply_move(node, &req)?;
    Ok(Json(to_value(result)))
}

async fn undo(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult {
    let session = store.get(&id)?;
    let tree = session.lock().undo()?;
    Ok(Json(to_value(tree)))
}

async fn auto(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult {
    let session = store.get(&id)?;
    let opts = SearchOptions {
        max_steps: AUTO_STEP_CAP,
        ..SearchOptions::default()
    };
    let verdict = tokio::task::spawn_blocking(move || session.lock().auto_run(&opts))
        .await
        .expect("auto-run task panicked")?;
    let (name, model) = match &verdict.result {
        SearchResult::Sat { model, .. } => ("SAT", Some(model)),
        SearchResult::Unsat => ("UNSAT", None),
    };
    Ok(Json(json!({
        "verdict": name,
        "model": model,
        "stats": verdict.stats,
    })))
}

/// Routes of the explorer service over `store`.
pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(tree))
        .route("/sessions/{id}/nodes/{node}/moves", get(moves).post(apply))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/auto", post(auto))
        .with_state(store)
}

/// Serves the explorer on `addr` until the process ends.
pub async fn serve(addr: SocketAddr, ttl: Duration) -> std::io::Result<()> {
    let store = Arc::new(SessionStore::new(ttl));
    let sweeper = Arc::clone(&store);
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60).min(ttl));
        loop {
            tick.tick().await;
            sweeper.evict_expired();
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(store)).await
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expired_sessions_are_evicted() {
        let store = SessionStore::new(Duration::from_millis(20));
        let id = store.insert(Session::new("p").unwrap());
        assert!(store.get(&id).is_ok());
        std::thread::sleep(Duration::from_millis(40));
        assert!(matches!(store.get(&id), Err(ExplorerError::UnknownSession(_))));
        store.evict_expired();
        assert!(store.is_empty());
    }
}
