//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use ltl_tableau::bench::generate_foo;
use ltl_tableau::oracle::{decide_graph, evaluate, random_formula};
use ltl_tableau::rules::{decompose, static_weight, Outcome};
use ltl_tableau::search::SearchResult;
use ltl_tableau::trace::TraceOutcome;
use ltl_tableau::{
    closure_set, parse_formula, run_parallel, solve, Formula, Label, PrincipalPolicy, RuleId,
    SearchOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn parse(text: &str) -> Formula {
    parse_formula(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn sat(f: Formula, opts: &SearchOptions) -> Result<bool, String> {
    solve(f, opts).map(|v| v.is_sat()).map_err(|e| format!("{f}: {e}"))
}

/// The shared random suite: sizes 1..=12 over p, q, r.
fn random_suite() -> Vec<Formula> {
    (0..1000u64).map(|i| random_formula(i, 1 + (i % 12) as usize, 3)).collect()
}

fn exemplars() -> Check {
    let started = Instant::now();
    let opts = SearchOptions::default();
    for text in ["true", "p", "F p", "p & X p & F ~p", "G p"] {
        if !sat(parse(text), &opts)? {
            return Err(format!("{text} reported UNSAT"));
        }
    }
    for text in ["false", "p & ~p", "F p & G ~p", "p & G(p -> X p) & F ~p"] {
        if sat(parse(text), &opts)? {
            return Err(format!("{text} reported SAT"));
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("9 verdicts in {elapsed:?}"))
}

fn figures() -> Check {
    let traced = |prune0| SearchOptions {
        record_trace: true,
        use_prune0: prune0,
        ..SearchOptions::default()
    };

    let v = solve(parse("~p & X~p & (q U p)"), &traced(true)).map_err(|e| e.to_string())?;
    let trace = v.trace.as_ref().expect("trace recorded");
    let transitions = trace.count(RuleId::Transition);
    let ticks = trace.events.iter().filter(|e| e.outcome == TraceOutcome::Tick).count();
    if !v.is_sat() || transitions < 2 || ticks != 1 {
        return Err(format!("delayed until: sat={} transitions={transitions} ticks={ticks}", v.is_sat()));
    }

    let v = solve(parse("G p"), &SearchOptions::default()).map_err(|e| e.to_string())?;
    match &v.result {
        SearchResult::Sat { model, closing, .. }
            if closing.rule == RuleId::Loop && model.period_len == 1 => {}
        other => return Err(format!("G p: {other:?}")),
    }

    let stuck = parse("G(p & q) & F ~p");
    let crossing_depth = |prune0: bool, rule: RuleId| -> Result<usize, String> {
        let v = solve(stuck, &traced(prune0)).map_err(|e| e.to_string())?;
        if v.is_sat() {
            return Err("G(p & q) & F ~p reported SAT".into());
        }
        let trace = v.trace.expect("trace recorded");
        trace
            .events
            .iter()
            .filter(|e| e.rule == rule)
            .map(|e| e.poised_depth)
            .max()
            .ok_or_else(|| format!("no {rule} cross (prune0={prune0})"))
    };
    let prune = crossing_depth(false, RuleId::Prune)?;
    let prune0 = crossing_depth(true, RuleId::Prune0)?;
    if prune0 >= prune {
        return Err(format!("PRUNE0 crossed at poised depth {prune0}, PRUNE at {prune}"));
    }
    Ok(format!(
        "{transitions} TRANSITIONs then tick; G p loops with period 1; PRUNE at depth {prune}, PRUNE0 at {prune0}"
    ))
}

fn foo_series() -> Check {
    let mut notes = Vec::new();
    for n in 2..=5 {
        let f = generate_foo(n).map_err(|e| e.to_string())?;
        let started = Instant::now();
        let v = solve(f, &SearchOptions::default()).map_err(|e| format!("foo_{n}: {e}"))?;
        let elapsed = started.elapsed();
        if !v.is_sat() {
            return Err(format!("foo_{n} reported UNSAT"));
        }
        if n == 2 && (elapsed >= Duration::from_secs(1) || v.stats.steps > 100_000) {
            return Err(format!("foo_2 took {elapsed:?} and {} steps", v.stats.steps));
        }
        notes.push(format!("foo_{n} {} steps", v.stats.steps));
    }
    Ok(notes.join(", "))
}

fn soundness(suite: &[Formula]) -> Check {
    let mut sat_count = 0;
    for &f in suite {
        let v = solve(f, &SearchOptions::default()).map_err(|e| format!("{f}: {e}"))?;
        if let Some(model) = v.model() {
            sat_count += 1;
            if !evaluate(model, f).map_err(|e| e.to_string())? {
                return Err(format!("{f}: extracted model {} does not satisfy it", model.to_json()));
            }
        }
    }
    Ok(format!("{sat_count} of {} SAT models verified", suite.len()))
}

fn graph_agreement() -> Check {
    let started = Instant::now();
    let opts = SearchOptions::default();
    let mut checked = 0;
    let mut seed = 10_000u64;
    let mut sat_count = 0;
    while checked < 1000 {
        let f = random_formula(seed, 1 + (seed % 12) as usize, 3);
        seed += 1;
        if closure_set(f).len() > 18 {
            continue;
        }
        let tableau = sat(f, &opts)?;
        let graph = decide_graph(f).map_err(|e| format!("{f}: {e}"))?;
        if tableau != graph {
            return Err(format!("{f}: tableau says {tableau}, graph says {graph}"));
        }
        sat_count += usize::from(tableau);
        checked += 1;
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(300) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("1000 agree ({sat_count} SAT) in {elapsed:?}"))
}

fn any_order(suite: &[Formula]) -> Check {
    for &f in suite.iter().take(200) {
        let expected = sat(f, &SearchOptions::default())?;
        for seed in 1..=5u64 {
            let opts = SearchOptions {
                policy: PrincipalPolicy::Seeded(seed * 7919),
                ..SearchOptions::default()
            };
            if sat(f, &opts)? != expected {
                return Err(format!("{f}: seed {seed} disagrees"));
            }
        }
    }
    Ok("200 formulas x 5 seeds agree".into())
}

fn progress(suite: &[Formula]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut applications = 0u64;
    while applications < 100_000 {
        let f = random_formula(rng.random(), rng.random_range(1..=12), 3);
        let members: Vec<Formula> = closure_set(f).iter().collect();
        let label = Label::new(members.iter().copied().filter(|_| rng.random_bool(0.3)).chain([f]));
        let before = static_weight(&label);
        for principal in label.iter().filter(|g| !g.is_elementary()) {
            let Some(out) = decompose(&label, principal) else { continue };
            applications += 1;
            if let Outcome::Children(children) = out.outcome {
                for child in children {
                    if static_weight(&child) >= before {
                        return Err(format!("{} on {label}: child {child} is not lighter", out.rule));
                    }
                }
            }
        }
    }
    // An occurrence-cap breach surfaces as a search error.
    for &f in suite {
        solve(f, &SearchOptions::default()).map_err(|e| format!("{f}: {e}"))?;
    }
    Ok(format!("{applications} applications decrease; no cap breach on {} formulas", suite.len()))
}

/// Random formula over `~ & X U` and atoms.
fn core_formula(rng: &mut ChaCha8Rng, size: usize) -> Formula {
    const ATOMS: [&str; 3] = ["p", "q", "r"];
    if size == 1 {
        return Formula::atom(ATOMS[rng.random_range(0..3)]);
    }
    let pick = rng.random_range(0..if size >= 3 { 4 } else { 2 });
    if pick < 2 {
        let a = core_formula(rng, size - 1);
        return if pick == 0 { a.not() } else { a.next() };
    }
    let left = rng.random_range(1..size - 1);
    let a = core_formula(rng, left);
    let b = core_formula(rng, size - 1 - left);
    if pick == 2 {
        a.and(b)
    } else {
        a.until(b)
    }
}

fn closure_bound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let size = rng.random_range(1..=20);
        let f = core_formula(&mut rng, size);
        let closure = closure_set(f).len();
        if closure > 4 * f.length() {
            return Err(format!("{f}: closure {closure} > 4 * {}", f.length()));
        }
        worst = worst.max(closure as f64 / f.length() as f64);
    }
    Ok(format!("500 formulas, worst ratio {worst:.2}"))
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

fn parallel(suite: &[Formula]) -> Check {
    let opts = SearchOptions::default();
    for &f in suite {
        let verdicts: Vec<bool> = [1, 4, 8]
            .iter()
            .map(|&w| run_parallel(f, w, &opts).map(|v| v.is_sat()))
            .collect::<Result<_, _>>()
            .map_err(|e| format!("{f}: {e}"))?;
        if verdicts.iter().any(|&v| v != verdicts[0]) {
            return Err(format!("{f}: verdicts {verdicts:?} for 1/4/8 workers"));
        }
    }
    let base = generate_foo(5).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for extra in ["G ~b5", "G ~b1"] {
        let f = base.and(parse(extra));
        // Interleaved so drift in machine load hits both sides alike.
        let (mut ones, mut eights) = (Vec::new(), Vec::new());
        for _ in 0..5 {
            for (workers, times) in [(1, &mut ones), (8, &mut eights)] {
                let v = run_parallel(f, workers, &opts).map_err(|e| e.to_string())?;
                if v.is_sat() {
                    return Err(format!("foo_5 & {extra} reported SAT"));
                }
                times.push(v.stats.wall_time);
            }
        }
        let (one, eight) = (median(ones), median(eights));
        let ratio = eight.as_secs_f64() / one.as_secs_f64();
        if ratio > 1.1 {
            return Err(format!("foo_5 & {extra}: 8 workers {eight:?} vs 1 worker {one:?}"));
        }
        notes.push(format!("foo_5 & {extra} ratio {ratio:.2}"));
    }
    Ok(format!("{} formulas agree; {}", suite.len(), notes.join(", ")))
}

fn main() {
    let suite = random_suite();
    let criteria: Vec<Criterion> = vec![
        ("exemplar verdicts", Box::new(exemplars)),
        ("figure formulas", Box::new(figures)),
        ("foo_n series", Box::new(foo_series)),
        ("soundness of extracted models", Box::new(|| soundness(&suite))),
        ("agreement with graph tableau", Box::new(graph_agreement)),
        ("any-order completeness", Box::new(|| any_order(&suite))),
        ("progress measure and occurrence cap", Box::new(|| progress(&suite))),
        ("closure bound", Box::new(closure_bound)),
        ("parallel equivalence", Box::new(|| parallel(&suite))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let started = Instant::now();
        let result = check();
        let elapsed = started.elapsed();
        match result {
            Ok(detail) => println!("PASS {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
