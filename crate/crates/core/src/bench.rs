//! Benchmark formulas and CSV rows.

use std::path::Path;

use thiserror::Error;

use crate::formula::{parse_formula, Formula, ParseError};
use crate::search::{run_parallel, SearchError, SearchOptions};

pub const CSV_HEADER: &str = "name,length,verdict,steps,depth,millis";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("foo_n needs n >= 2, got {0}")]
    FooTooSmall(usize),
    #[error("unknown series `{0}` (expected foo, patterns or @file)")]
    UnknownSeries(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {source}")]
    Parse {
        path: String,
        line: usize,
        source: ParseError,
    },
}

/// `a ∧ G(a ↔ X¬a) ∧ ⋀ GF bᵢ ∧ ⋀ G(bᵢ → ¬a) ∧ ⋀_{i<j} G¬(bᵢ ∧ bⱼ)`
/// with `b1..bn`, as one left-associated conjunction.
///
/// `a` alternates, each `bᵢ` recurs, only on `¬a` steps, and no two `b`s
/// share a step.
pub fn generate_foo(n: usize) -> Result<Formula, BenchError> {
    if n < 2 {
        return Err(BenchError::FooTooSmall(n));
    }
    let a = Formula::atom("a");
    let bs: Vec<Formula> = (1..=n).map(|i| Formula::atom(&format!("b{i}"))).collect();
    let mut parts = vec![a, a.iff(a.not().next()).globally()];
    parts.extend(bs.iter().map(|b| b.finally().globally()));
    parts.extend(bs.iter().map(|b| b.implies(a.not()).globally()));
    for i in 0..n {
        for j in i + 1..n {
            parts.push(bs[i].and(bs[j]).not().globally());
        }
    }
    Ok(Formula::conjoin(parts).expect("nonempty"))
}

/// A named formula with its known verdict.
#[derive(Debug, Clone, Copy)]
pub struct Pattern {
    pub name: &'static str,
    pub text: &'static str,
    pub sat: bool,
}

pub const PATTERNS: &[Pattern] = &[
    Pattern { name: "top", text: "true", sat: true },
    Pattern { name: "atom", text: "p", sat: true },
    Pattern { name: "eventually", text: "F p", sat: true },
    Pattern { name: "change", text: "p & X p & F ~p", sat: true },
    Pattern { name: "always", text: "G p", sat: true },
    Pattern { name: "bottom", text: "false", sat: false },
    Pattern { name: "clash", text: "p & ~p", sat: false },
    Pattern { name: "never", text: "F p & G ~p", sat: false },
    Pattern { name: "induction", text: "p & G(p -> X p) & F ~p", sat: false },
    Pattern { name: "delayed_until", text: "~p & X ~p & (q U p)", sat: true },
    Pattern { name: "stuck_always", text: "G(p & q) & F ~p", sat: false },
];

#[derive(Debug, Clone)]
pub struct BenchCase {
    pub name: String,
    pub formula: Formula,
}

/// Cases of a series: `foo` (foo_2..foo_n), `patterns`, or `@path` with one
/// formula per line (blank lines and `#` comments skipped).
pub fn series_cases(series: &str, n: usize) -> Result<Vec<BenchCase>, BenchError> {
    match series {
        "foo" => (2..=n.max(2))
            .map(|k| {
                Ok(BenchCase {
                    name: format!("foo_{k}"),
                    formula: generate_foo(k)?,
                })
            })
            .collect(),
        "patterns" => Ok(PATTERNS
            .iter()
            .map(|p| BenchCase {
                name: p.name.to_string(),
                formula: parse_formula(p.text).expect("built-in pattern parses"),
            })
            .collect()),
        _ => match series.strip_prefix('@') {
            Some(path) => read_cases(Path::new(path)),
            None => Err(BenchError::UnknownSeries(series.to_string())),
        },
    }
}

/// One formula per non-blank, non-`#` line, named `<file stem>:<line>`.
pub fn read_cases(path: &Path) -> Result<Vec<BenchCase>, BenchError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: shown.clone(),
        source,
    })?;
    let stem = path
        .file_stem()
        .map_or_else(|| shown.clone(), |s| s.to_string_lossy().into_owned());
    let mut cases = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let formula = parse_formula(line).map_err(|source| BenchError::Parse {
            path: shown.clone(),
            line: i + 1,
            source,
        })?;
        cases.push(BenchCase {
            name: format!("{stem}:{}", i + 1),
            formula,
        });
    }
    Ok(cases)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub length: usize,
    /// `SAT`, `UNSAT` or `CAP`.
    pub verdict: &'static str,
    pub steps: u64,
    pub depth: usize,
    pub millis: f64,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{:.3}",
            self.name, self.length, self.verdict, self.steps, self.depth, self.millis
        )
    }
}

pub fn run_case(case: &BenchCase, workers: usize, opts: &SearchOptions) -> Result<BenchRow, SearchError> {
    let row = |verdict, steps, depth, millis| BenchRow {
        name: case.name.clone(),
        length: case.formula.length(),
        verdict,
        steps,
        depth,
        millis,
    };
    match run_parallel(case.formula, workers, opts) {
        Ok(v) => Ok(row(
            if v.is_sat() { "SAT" } else { "UNSAT" },
            v.stats.steps,
            v.stats.max_poised_depth,
            v.stats.wall_time.as_secs_f64() * 1000.0,
        )),
        Err(SearchError::StepCap { limit }) => Ok(row("CAP", limit, 0, 0.0)),
        Err(SearchError::DepthCap { limit }) => Ok(row("CAP", 0, limit, 0.0)),
        Err(e) => Err(e),
    }
}
