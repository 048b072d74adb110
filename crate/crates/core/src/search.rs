//! Tableau search: depth-first per worker, with open siblings shared
//! between workers through work-stealing deques.
//!
//! Branches are persistent and value-isolated, so a task is just the branch
//! whose tip still needs a rule. The first tick wins and cancels everything
//! else; the verdict is UNSAT once every task has ended in a cross.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use crossbeam::deque::{Injector, Steal, Stealer, Worker};
use parking_lot::{Condvar, Mutex};
use serde::Serialize;
use thiserror::Error;

use crate::branch::{Branch, TableauContext};
use crate::formula::Formula;
use crate::label::Label;
use crate::model::{extract_model, LassoModel};
use crate::rules::{self, Outcome, PrincipalPolicy, RuleId, RuleOutcome};
use crate::trace::{Trace, TraceEvent, TraceOutcome};

pub const DEFAULT_MAX_STEPS: u64 = 100_000_000;
pub const DEFAULT_MAX_POISED_DEPTH: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub policy: PrincipalPolicy,
    pub use_prune0: bool,
    pub max_steps: u64,
    pub max_poised_depth: usize,
    pub record_trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            policy: PrincipalPolicy::Priority,
            use_prune0: true,
            max_steps: DEFAULT_MAX_STEPS,
            max_poised_depth: DEFAULT_MAX_POISED_DEPTH,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("step cap of {limit} rule applications exceeded")]
    StepCap { limit: u64 },
    #[error("poised depth cap of {limit} exceeded")]
    DepthCap { limit: usize },
    #[error("internal error: poised label {label} recurred more than {cap} times on one branch")]
    OccurrenceCap { label: String, cap: u64 },
    #[error("worker count must be at least 1")]
    NoWorkers,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Rule applications, including the tick or cross at each leaf.
    pub steps: u64,
    /// Most poised nodes seen on a single branch.
    pub max_poised_depth: usize,
    /// Leaves reached (ticked or crossed).
    pub branches_explored: u64,
    pub rule_counts: BTreeMap<RuleId, u64>,
    #[serde(serialize_with = "millis")]
    pub wall_time: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

#[derive(Debug, Clone)]
pub enum SearchResult {
    Sat {
        model: LassoModel,
        /// The ticked branch, root to leaf.
        branch: Branch,
        /// The EMPTY or LOOP application that ticked it.
        closing: RuleOutcome,
    },
    Unsat,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub result: SearchResult,
    pub stats: SearchStats,
    pub trace: Option<Trace>,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self.result, SearchResult::Sat { .. })
    }

    pub fn model(&self) -> Option<&LassoModel> {
        match &self.result {
            SearchResult::Sat { model, .. } => Some(model),
            SearchResult::Unsat => None,
        }
    }
}

/// Decides satisfiability of `f` on the calling thread.
pub fn solve(f: Formula, opts: &SearchOptions) -> Result<Verdict, SearchError> {
    let ctx = TableauContext::new(f);
    search_from(&ctx, vec![Branch::root(&ctx, 0)], 1, 1, opts)
}

/// Like [`solve`] but spread over `workers` threads. With one worker the
/// search runs on the calling thread and matches [`solve`] exactly.
pub fn run_parallel(f: Formula, workers: usize, opts: &SearchOptions) -> Result<Verdict, SearchError> {
    let ctx = TableauContext::new(f);
    search_from(&ctx, vec![Branch::root(&ctx, 0)], 1, workers, opts)
}

/// Continues a tableau from the given open branches, whose tips still need
/// a rule. New nodes are numbered from `next_node_id`.
pub fn search_from(
    ctx: &TableauContext,
    open: Vec<Branch>,
    next_node_id: u64,
    workers: usize,
    opts: &SearchOptions,
) -> Result<Verdict, SearchError> {
    if workers == 0 {
        return Err(SearchError::NoWorkers);
    }
    let started = Instant::now();
    let shared = Shared {
        ctx,
        opts,
        injector: Injector::new(),
        pending: AtomicUsize::new(open.len()),
        done: AtomicBool::new(false),
        steps: AtomicU64::new(0),
        next_id: AtomicU64::new(next_node_id),
        finish: Mutex::new(None),
        sleepers: AtomicUsize::new(0),
        idle_lock: Mutex::new(()),
        idle: Condvar::new(),
    };
    for b in open.into_iter().rev() {
        shared.injector.push(b);
    }

    let deques: Vec<Worker<Branch>> = (0..workers).map(|_| Worker::new_lifo()).collect();
    let stealers: Vec<Stealer<Branch>> = deques.iter().map(Worker::stealer).collect();

    let locals: Vec<Local> = if workers == 1 {
        let deque = deques.into_iter().next().expect("one deque");
        vec![run_worker(&shared, deque, &stealers, 0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = deques
                .into_iter()
                .enumerate()
                .map(|(i, deque)| {
                    let shared = &shared;
                    let stealers = &stealers;
                    scope.spawn(move || run_worker(shared, deque, stealers, i))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect()
        })
    };

    let mut stats = SearchStats::default();
    let mut counts = [0u64; RuleId::ALL.len()];
    let mut events = Vec::new();
    for local in locals {
        stats.steps += local.steps;
        stats.max_poised_depth = stats.max_poised_depth.max(local.max_poised_depth);
        stats.branches_explored += local.leaves;
        for (total, n) in counts.iter_mut().zip(local.rule_counts) {
            *total += n;
        }
        events.extend(local.events);
    }
    stats.rule_counts = RuleId::ALL
        .iter()
        .zip(counts)
        .filter(|(_, n)| *n > 0)
        .map(|(r, n)| (*r, n))
        .collect();
    stats.wall_time = started.elapsed();

    let trace = opts.record_trace.then(|| {
        events.sort_by_key(|e: &TraceEvent| e.node_id);
        Trace {
            root: ctx.root(),
            events,
        }
    });

    match shared.finish.into_inner() {
        Some(Finish::Error(e)) => Err(e),
        Some(Finish::Tick { branch, closing }) => {
            let model = extract_model(&branch, &closing).expect("ticked branch yields a model");
            Ok(Verdict {
                result: SearchResult::Sat {
                    model,
                    branch,
                    closing,
                },
                stats,
                trace,
            })
        }
        None => Ok(Verdict {
            result: SearchResult::Unsat,
            stats,
            trace,
        }),
    }
}

enum Finish {
    Tick { branch: Branch, closing: RuleOutcome },
    Error(SearchError),
}

struct Shared<'a> {
    ctx: &'a TableauContext,
    opts: &'a SearchOptions,
    injector: Injector<Branch>,
    /// Tasks created and not yet finished.
    pending: AtomicUsize,
    done: AtomicBool,
    steps: AtomicU64,
    next_id: AtomicU64,
    finish: Mutex<Option<Finish>>,
    sleepers: AtomicUsize,
    idle_lock: Mutex<()>,
    idle: Condvar,
}

impl Shared<'_> {
    fn conclude(&self, finish: Finish) {
        let mut slot = self.finish.lock();
        if slot.is_none() {
            *slot = Some(finish);
        }
        drop(slot);
        self.done.store(true, Ordering::SeqCst);
        self.wake_all();
    }

    fn task_finished(&self) {
        if self.pending.fetch_sub(1, Ordering::AcqRel) == 1 {
            self.wake_all();
        }
    }

    // Notifying under the idle lock means a worker that has just checked
    // for work and is about to wait cannot miss the signal.
    fn wake_all(&self) {
        let _guard = self.idle_lock.lock();
        self.idle.notify_all();
    }

    fn wake_one(&self) {
        std::sync::atomic::fence(Ordering::SeqCst);
        if self.sleepers.load(Ordering::SeqCst) > 0 {
            let _guard = self.idle_lock.lock();
            self.idle.notify_one();
        }
    }

    fn finished(&self) -> bool {
        self.done.load(Ordering::Relaxed) || self.pending.load(Ordering::Acquire) == 0
    }
}

#[derive(Default)]
struct Local {
    steps: u64,
    unflushed: u64,
    max_poised_depth: usize,
    leaves: u64,
    rule_counts: [u64; RuleId::ALL.len()],
    events: Vec<TraceEvent>,
}

const FLUSH_EVERY: u64 = 64;

/// Safety net for idle workers; wake-ups normally come from notifications.
const IDLE_TIMEOUT: Duration = Duration::from_millis(20);

fn find_task(shared: &Shared<'_>, deque: &Worker<Branch>, stealers: &[Stealer<Branch>], me: usize) -> Option<Branch> {
    if let Some(b) = deque.pop() {
        return Some(b);
    }
    loop {
        let mut retry = false;
        match shared.injector.steal_batch_and_pop(deque) {
            Steal::Success(b) => return Some(b),
            Steal::Retry => retry = true,
            Steal::Empty => {}
        }
        let n = stealers.len();
        for k in 1..n {
            match stealers[(me + k) % n].steal() {
                Steal::Success(b) => return Some(b),
                Steal::Retry => retry = true,
                Steal::Empty => {}
            }
        }
        if !retry {
            return None;
        }
    }
}

fn run_worker(shared: &Shared<'_>, deque: Worker<Branch>, stealers: &[Stealer<Branch>], me: usize) -> Local {
    let mut local = Local::default();
    loop {
        if shared.done.load(Ordering::Relaxed) {
            break;
        }
        let Some(task) = find_task(shared, &deque, stealers, me) else {
            if shared.finished() {
                break;
            }
            shared.sleepers.fetch_add(1, Ordering::SeqCst);
            let mut guard = shared.idle_lock.lock();
            let visible = !shared.injector.is_empty() || stealers.iter().any(|st| !st.is_empty());
            if !shared.finished() && !visible {
                shared.idle.wait_for(&mut guard, IDLE_TIMEOUT);
            }
            drop(guard);
            shared.sleepers.fetch_sub(1, Ordering::SeqCst);
            continue;
        };
        if let Err(e) = run_line(shared, &deque, task, &mut local) {
            shared.conclude(Finish::Error(e));
        }
        shared.task_finished();
    }
    shared.steps.fetch_add(local.unflushed, Ordering::Relaxed);
    local
}

fn swap_children(policy: PrincipalPolicy, label: &Label) -> bool {
    match policy {
        PrincipalPolicy::Priority => false,
        PrincipalPolicy::Seeded(seed) => {
            let mut h = std::collections::hash_map::DefaultHasher::new();
            (seed, 0xc41d_u32).hash(&mut h);
            for f in label.iter() {
                f.id().hash(&mut h);
            }
            h.finish() & 1 == 1
        }
    }
}

/// Follows one line of the tableau depth-first, pushing right siblings as
/// stealable tasks, until a tick or cross.
fn run_line(
    shared: &Shared<'_>,
    deque: &Worker<Branch>,
    mut branch: Branch,
    local: &mut Local,
) -> Result<(), SearchError> {
    let ctx = shared.ctx;
    let opts = shared.opts;
    loop {
        if shared.done.load(Ordering::Relaxed) {
            return Ok(());
        }
        local.steps += 1;
        local.unflushed += 1;
        if local.unflushed >= FLUSH_EVERY {
            shared.steps.fetch_add(local.unflushed, Ordering::Relaxed);
            local.unflushed = 0;
        }
        if shared.steps.load(Ordering::Relaxed) + local.unflushed > opts.max_steps {
            return Err(SearchError::StepCap {
                limit: opts.max_steps,
            });
        }

        let tip = branch.tip();
        let depth = tip.poised_depth();
        local.max_poised_depth = local.max_poised_depth.max(depth);
        if depth > opts.max_poised_depth {
            return Err(SearchError::DepthCap {
                limit: opts.max_poised_depth,
            });
        }

        let outcome = match rules::apply_static(tip.label(), opts.policy) {
            Some(out) => out,
            None => {
                let cap = ctx.occurrence_cap();
                if branch.repeats().len() as u64 + 1 > cap {
                    return Err(SearchError::OccurrenceCap {
                        label: tip.label().to_string(),
                        cap,
                    });
                }
                rules::apply_poised(&branch, opts.use_prune0)
            }
        };
        local.rule_counts[outcome.rule as usize] += 1;

        let mut child_ids = Vec::new();
        let mut children = Vec::new();
        if let Outcome::Children(labels) = &outcome.outcome {
            let first = shared.next_id.fetch_add(labels.len() as u64, Ordering::Relaxed);
            child_ids = (first..first + labels.len() as u64).collect();
            children = labels.iter().cloned().zip(child_ids.iter().copied()).collect();
        }

        if opts.record_trace {
            local.events.push(event_for(&branch, &outcome, &child_ids));
        }

        match outcome.outcome {
            Outcome::Tick => {
                local.leaves += 1;
                shared.conclude(Finish::Tick {
                    branch,
                    closing: outcome,
                });
                return Ok(());
            }
            Outcome::Cross => {
                local.leaves += 1;
                return Ok(());
            }
            Outcome::Children(_) => {
                let mut children: Vec<(Label, u64)> = children;
                if children.len() == 2 && swap_children(opts.policy, tip.label()) {
                    children.swap(0, 1);
                }
                let mut iter = children.into_iter();
                let (first_label, first_id) = iter.next().expect("at least one child");
                if let Some((second_label, second_id)) = iter.next() {
                    shared.pending.fetch_add(1, Ordering::AcqRel);
                    deque.push(branch.extend(ctx, second_label, second_id));
                    shared.wake_one();
                }
                branch = branch.extend(ctx, first_label, first_id);
            }
        }
    }
}

fn event_for(branch: &Branch, outcome: &RuleOutcome, child_ids: &[u64]) -> TraceEvent {
    let tip = branch.tip();
    let evidence = if outcome.evidence.is_empty() {
        Vec::new()
    } else {
        let nodes = branch.nodes();
        outcome.evidence.iter().map(|&pos| nodes[pos].node_id()).collect()
    };
    TraceEvent {
        node_id: tip.node_id(),
        parent_id: branch.parent().map(|p| p.tip().node_id()),
        label: tip.label().clone(),
        poised_depth: tip.poised_depth(),
        rule: outcome.rule,
        principal: outcome.principal,
        outcome: match &outcome.outcome {
            Outcome::Tick => TraceOutcome::Tick,
            Outcome::Cross => TraceOutcome::Cross,
            Outcome::Children(_) => TraceOutcome::Children(child_ids.to_vec()),
        },
        evidence,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn verdict(text: &str) -> Verdict {
        solve(parse_formula(text).unwrap(), &SearchOptions::default()).unwrap()
    }

    #[test]
    fn globally_p_loops_with_one_state() {
        let v = verdict("G p");
        let SearchResult::Sat { model, closing, .. } = &v.result else {
            panic!("G p is satisfiable");
        };
        assert_eq!(closing.rule, RuleId::Loop);
        assert_eq!((model.prefix_len, model.period_len), (0, 1));
        assert_eq!(model.states[0].atoms, vec!["p"]);
    }

    #[test]
    fn single_atom_ticks_on_empty() {
        let v = verdict("p");
        let SearchResult::Sat { model, closing, .. } = &v.result else {
            panic!("p is satisfiable");
        };
        assert_eq!(closing.rule, RuleId::Empty);
        assert_eq!(model.len(), 2);
        assert_eq!(model.edges, vec![(0, 1), (1, 1)]);
        assert_eq!(model.states[0].atoms, vec!["p"]);
        assert!(model.states[1].atoms.is_empty());
    }

    #[test]
    fn unsat_examples() {
        for text in ["F p & G ~p", "p & ~p", "false", "p & G(p -> X p) & F ~p"] {
            assert!(!verdict(text).is_sat(), "{text}");
        }
    }

    #[test]
    fn negated_always_is_an_eventuality() {
        assert!(!verdict("~G p & G(p & q)").is_sat());
        assert!(verdict("~G p & G q").is_sat());
    }

    #[test]
    fn caps_are_reported_distinctly() {
        let f = parse_formula("G F p & G F q & G(p -> ~q)").unwrap();
        let opts = SearchOptions {
            max_steps: 5,
            ..SearchOptions::default()
        };
        assert_eq!(solve(f, &opts).unwrap_err(), SearchError::StepCap { limit: 5 });
        let opts = SearchOptions {
            max_poised_depth: 1,
            ..SearchOptions::default()
        };
        assert_eq!(solve(f, &opts).unwrap_err(), SearchError::DepthCap { limit: 1 });
    }

    #[test]
    fn stats_are_consistent() {
        let v = verdict("G(p & q) & F ~p");
        assert!(v.stats.steps >= v.stats.max_poised_depth as u64);
        assert_eq!(v.stats.rule_counts.values().sum::<u64>(), v.stats.steps);
    }

    #[test]
    fn zero_workers_is_an_error() {
        let f = parse_formula("p").unwrap();
        assert_eq!(run_parallel(f, 0, &SearchOptions::default()).unwrap_err(), SearchError::NoWorkers);
    }
}
