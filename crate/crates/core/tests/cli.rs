use std::process::{Command, Output};

use serde_json::Value;

fn ltltab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltltab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// CSV rows without the wall-clock column.
fn deterministic_columns(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect()
}

#[test]
fn solve_prints_a_looping_model() {
    let o = ltltab(&["solve", "G p", "--model"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("SAT"));
    let model: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(model["states"].as_array().unwrap().len(), 1);
    assert_eq!(model["states"][0]["atoms"], serde_json::json!(["p"]));
    assert_eq!(model["edges"], serde_json::json!([[0, 0]]));
    assert_eq!(model["period_len"], 1);
}

#[test]
fn unsat_exits_one() {
    let o = ltltab(&["solve", "G(p & q) & F ~p"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "UNSAT");
}

#[test]
fn json_trace_shows_transitions_and_a_tick() {
    let o = ltltab(&["solve", "~p & X~p & (q U p)", "--trace", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let trace: Value = serde_json::from_str(out.lines().nth(1).unwrap()).unwrap();
    let events = trace["events"].as_array().unwrap();
    let transitions = events.iter().filter(|e| e["rule"] == "TRANSITION").count();
    let ticks = events.iter().filter(|e| e["outcome"] == "tick").count();
    assert!(transitions >= 2, "{transitions} transitions");
    assert_eq!(ticks, 1);
    for e in events {
        for key in ["node_id", "parent_id", "label", "poised", "depth", "rule", "principal", "outcome", "evidence"] {
            assert!(e.get(key).is_some(), "event lacks {key}");
        }
    }
}

#[test]
fn dot_trace_is_a_digraph() {
    let o = ltltab(&["solve", "G p", "--trace", "dot"]);
    let out = stdout(&o);
    assert!(out.contains("digraph tableau {"));
    assert!(out.contains("peripheries=2"));
    assert!(out.trim_end().ends_with('}'));
}

#[test]
fn stats_are_json() {
    let o = ltltab(&["solve", "F p & G ~p", "--stats"]);
    assert_eq!(o.status.code(), Some(1));
    let stats: Value = serde_json::from_str(stdout(&o).lines().nth(1).unwrap()).unwrap();
    assert!(stats["steps"].as_u64().unwrap() > 0);
    assert!(stats["rule_counts"].is_object());
}

#[test]
fn parse_errors_exit_two_with_position() {
    let o = ltltab(&["solve", "p & (q"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("byte 6"), "{err}");
    assert!(err.lines().last().unwrap().ends_with('^'));
}

#[test]
fn exceeded_caps_exit_two() {
    let o = ltltab(&["solve", "G F p & G F ~p", "--caps", "3,"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("step cap"));
}

#[test]
fn formulas_can_come_from_files() {
    let dir = std::env::temp_dir().join(format!("ltltab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.ltl");
    std::fs::write(&path, "p U q & G ~q\n").unwrap();
    let o = ltltab(&["solve", &format!("@{}", path.display())]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn oracle_agrees_with_solve() {
    for (text, code) in [("p U q & F ~q", 0), ("p & G(p -> X p) & F ~p", 1)] {
        assert_eq!(ltltab(&["oracle", text]).status.code(), Some(code), "{text}");
        assert_eq!(ltltab(&["solve", text]).status.code(), Some(code), "{text}");
    }
}

#[test]
fn gen_prints_foo() {
    let o = ltltab(&["gen", "foo", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "a & G(a <-> X~a) & G F b1 & G F b2 & G(b1 -> ~a) & G(b2 -> ~a) & G~(b1 & b2)"
    );
}

#[test]
fn bench_csv_is_stable_across_runs() {
    let args = ["bench", "foo", "--n", "3", "--seed", "11", "--repeat", "2"];
    let first = stdout(&ltltab(&args));
    let second = stdout(&ltltab(&args));
    assert_eq!(first.lines().next(), Some("name,length,verdict,steps,depth,millis"));
    assert_eq!(first.lines().count(), 1 + 2 * 2);
    assert_eq!(deterministic_columns(&first), deterministic_columns(&second));
    for row in first.lines().skip(1) {
        assert_eq!(row.split(',').nth(2), Some("SAT"), "{row}");
    }
}

#[test]
fn bench_patterns_match_expected_verdicts() {
    let out = stdout(&ltltab(&["bench", "patterns"]));
    let verdicts: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    let expected: Vec<&str> = ltl_tableau::bench::PATTERNS
        .iter()
        .map(|p| if p.sat { "SAT" } else { "UNSAT" })
        .collect();
    assert_eq!(verdicts, expected);
}

#[test]
fn unknown_series_is_an_error() {
    assert_eq!(ltltab(&["bench", "nope"]).status.code(), Some(2));
}
