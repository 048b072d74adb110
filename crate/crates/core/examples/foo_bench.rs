//! Benchmark the foo series and print CSV.
//!
//! Run with `cargo run --release --example foo_bench -- 6`.

use ltl_tableau::bench::{run_case, series_cases, CSV_HEADER};
use ltl_tableau::SearchOptions;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    println!("{CSV_HEADER}");
    for case in series_cases("foo", n).expect("n is at least 2") {
        let row = run_case(&case, 1, &SearchOptions::default()).expect("search finishes");
        println!("{}", row.csv_line());
    }
}
