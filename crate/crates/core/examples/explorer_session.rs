//! Build a tableau by hand, one move at a time, always taking the first
//! suggested move on the first open leaf.
//!
//! Run with `cargo run --example explorer_session -- "G p"`.

use ltl_tableau::explorer::{MoveRequest, PrincipalRef, Session};
use ltl_tableau::SearchOptions;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "G p".into());
    let mut session = Session::new(&text).expect("formula parses");
    while let Some(&node) = session.open_leaves().first() {
        let moves = session.list_moves(node).expect("node exists");
        let m = &moves[0];
        let request = MoveRequest {
            rule: m.rule.to_string(),
            principal: m.principal_key.map(PrincipalRef::Key),
            revision: Some(session.revision()),
        };
        let result = session.apply_move(node, &request).expect("listed moves are legal");
        println!(
            "node {node}: {} {} -> {:?} {:?}",
            m.rule,
            m.principal.as_deref().unwrap_or(""),
            result.node.children,
            result.node.status
        );
        if let Some(model) = result.model {
            println!("model: {}", model.to_json());
            break;
        }
    }
    let tree = session.tree();
    println!("{} nodes, tree is {:?}", tree.nodes.len(), tree.status);

    session.undo().expect("at least one move was made");
    let verdict = session.auto_run(&SearchOptions::default()).expect("search finishes");
    println!("after one undo, auto-run says {}", if verdict.is_sat() { "SAT" } else { "UNSAT" });
}
