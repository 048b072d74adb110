//! Step-by-step manual tableau construction, in memory and over HTTP.

mod http;
mod session;

pub use http::{router, serve, SessionStore, DEFAULT_TTL};
pub use session::{
    ApplyResult, ExplorerError, Move, MoveRequest, NodeStatus, NodeView, PrincipalRef, Session,
    TreeView,
};
