//! Compare the tableau against the graph oracle on random formulas.
//!
//! Run with `cargo run --release --example oracle_crosscheck -- 2000`.

use ltl_tableau::oracle::{decide_graph_with_limit, evaluate, random_formula, GraphError};
use ltl_tableau::{solve, SearchError, SearchOptions};

fn main() {
    let count: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(500);
    // A few random formulas hide an eventuality that can never be met, such
    // as `p U false`; the tableau only refutes those after exponentially many
    // steps, so they are counted rather than waited for.
    let opts = SearchOptions {
        max_steps: 1_000_000,
        ..SearchOptions::default()
    };
    let (mut agreed, mut skipped, mut capped) = (0, 0, 0);
    for seed in 0..count {
        let f = random_formula(seed, 1 + seed as usize % 15, 3);
        let expected = match decide_graph_with_limit(f, 16) {
            Ok(sat) => sat,
            Err(GraphError::TooLarge { .. }) => {
                skipped += 1;
                continue;
            }
        };
        let verdict = match solve(f, &opts) {
            Ok(v) => v,
            Err(SearchError::StepCap { .. }) => {
                println!("capped: {f}");
                capped += 1;
                continue;
            }
            Err(e) => panic!("{f}: {e}"),
        };
        assert_eq!(verdict.is_sat(), expected, "disagreement on {f}");
        if let Some(m) = verdict.model() {
            assert!(evaluate(m, f).expect("model is well formed"), "bad model for {f}");
        }
        agreed += 1;
    }
    println!("{agreed} formulas agree, {skipped} too large for the oracle, {capped} capped");
}
