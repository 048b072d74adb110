//! Extract a lasso model from a satisfiable formula and check it.
//!
//! Run with `cargo run --example lasso_model -- "G(p <-> X~p) & F q"`.

use ltl_tableau::oracle::evaluate;
use ltl_tableau::{parse_formula, solve, SearchOptions};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "G(p <-> X~p) & F q".into());
    let f = parse_formula(&text).expect("formula parses");
    let verdict = solve(f, &SearchOptions::default()).expect("search finishes");
    let Some(model) = verdict.model() else {
        println!("{text} is unsatisfiable");
        return;
    };
    println!("{}", model.to_json());
    let loop_start = model.successor(model.len() - 1);
    println!("{} states, the last one looping back to state {loop_start}", model.len());
    for i in 0..2 * model.len() {
        println!("step {i}: state {}", model.state_at(i));
    }
    println!("model satisfies formula: {}", evaluate(model, f).expect("model is well formed"));
}
