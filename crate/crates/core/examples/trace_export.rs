//! Record the tableau of a formula and export it as JSON and Graphviz.
//!
//! Run with `cargo run --example trace_export > tableau.dot`, then render
//! with `dot -Tsvg tableau.dot`.

use ltl_tableau::{parse_formula, solve, RuleId, SearchOptions};

fn main() {
    let f = parse_formula("~p & X~p & (q U p)").expect("formula parses");
    let opts = SearchOptions {
        record_trace: true,
        ..SearchOptions::default()
    };
    let verdict = solve(f, &opts).expect("search finishes");
    let trace = verdict.trace.expect("trace recorded");
    eprintln!(
        "{} nodes, {} TRANSITIONs",
        trace.events.len(),
        trace.count(RuleId::Transition)
    );
    eprintln!("{}", trace.to_json());
    print!("{}", trace.to_dot());
}
