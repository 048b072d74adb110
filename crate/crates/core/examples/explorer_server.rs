//! Serve the explorer API.
//!
//! Run with `cargo run --example explorer_server`, then for example:
//!
//! ```text
//! curl -X POST localhost:8080/sessions -H 'content-type: application/json' -d '{"formula":"G F p"}'
//! curl localhost:8080/sessions/<id>/nodes/0/moves
//! curl -X POST localhost:8080/sessions/<id>/auto
//! ```

use std::time::Duration;

use ltl_tableau::explorer::{serve, DEFAULT_TTL};

fn main() -> std::io::Result<()> {
    let addr = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "127.0.0.1:8080".into())
        .parse()
        .expect("address like 127.0.0.1:8080");
    let ttl: Duration = DEFAULT_TTL;
    println!("explorer listening on http://{addr}");
    tokio::runtime::Runtime::new()?.block_on(serve(addr, ttl))
}
