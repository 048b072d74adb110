//! Decide a handful of formulas and print their verdicts.
//!
//! Run with `cargo run --example solve_basic`.

use ltl_tableau::{parse_formula, solve, SearchOptions};

fn main() {
    let formulas = [
        "G F p & G F ~p",
        "p U q & G ~q",
        "G(req -> F grant) & G F req",
        "p & G(p -> X p) & F ~p",
    ];
    for text in formulas {
        let f = parse_formula(text).expect("formula parses");
        let verdict = solve(f, &SearchOptions::default()).expect("search finishes");
        let answer = if verdict.is_sat() { "SAT" } else { "UNSAT" };
        println!("{answer:5} {text}  ({} steps)", verdict.stats.steps);
    }
}
