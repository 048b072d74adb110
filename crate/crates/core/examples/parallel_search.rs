//! Solve one formula sequentially and with several work-stealing workers.
//!
//! Run with `cargo run --release --example parallel_search -- 4`.

use std::time::Instant;

use ltl_tableau::bench::generate_foo;
use ltl_tableau::{parse_formula, run_parallel, SearchOptions};

fn main() {
    let workers: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    // Unsatisfiable, so every worker count has to explore the whole tree.
    let f = generate_foo(5)
        .expect("n is at least 2")
        .and(parse_formula("G ~b5").expect("formula parses"));
    for w in [1, workers] {
        let start = Instant::now();
        let verdict = run_parallel(f, w, &SearchOptions::default()).expect("search finishes");
        println!(
            "{w} worker(s): {} in {:?}, {} steps",
            if verdict.is_sat() { "SAT" } else { "UNSAT" },
            start.elapsed(),
            verdict.stats.steps
        );
    }
}
