//! Multi-pass graph tableau: build every locally consistent state over the
//! closure, connect states whose `X` obligations match, then repeatedly
//! delete states without successors and states whose eventualities can no
//! longer be reached.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::formula::{Formula, Kind};
use crate::model::LassoModel;

/// Default bound on the free (atom and `X`) formulas: `2^20` states.
pub const DEFAULT_ELEMENTARY_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("closure has {free} free formulas, over the limit of {limit}")]
    TooLarge { free: usize, limit: usize },
}

#[derive(Debug, Clone, Copy)]
enum Promise {
    /// `a U b` or `F b`: promised when true.
    Holds,
    /// `G a`: promises `~a` when false.
    Fails,
}

#[derive(Debug, Clone, Copy)]
struct Eventuality {
    formula: usize,
    target: usize,
    promise: Promise,
}

/// States, temporal edges and the survivors of elimination for one formula.
#[derive(Debug, Clone)]
pub struct GraphTableau {
    root: usize,
    base: Vec<Formula>,
    /// Pairs `(x, inner)`: base index of `X inner` and of `inner`.
    nexts: Vec<(usize, usize)>,
    eventualities: Vec<Eventuality>,
    states: Vec<Vec<bool>>,
    /// State indices grouped by the values they give to `X` operands.
    by_current: HashMap<Vec<bool>, Vec<usize>>,
    alive: Vec<bool>,
}

impl GraphTableau {
    pub fn build(f: Formula, free_limit: usize) -> Result<GraphTableau, GraphError> {
        // Subformulas (children first) plus the X-wrappers the local rules need.
        let mut base: Vec<Formula> = Vec::new();
        let mut index: HashMap<Formula, usize> = HashMap::new();
        let mut add = |g: Formula, base: &mut Vec<Formula>| {
            *index.entry(g).or_insert_with(|| {
                base.push(g);
                base.len() - 1
            })
        };
        for sub in f.subformulas() {
            for c in sub.kind().children() {
                add(c, &mut base);
            }
            add(sub, &mut base);
            if matches!(sub.kind(), Kind::Until(..) | Kind::Finally(_) | Kind::Globally(_)) {
                add(sub.next(), &mut base);
            }
        }
        let idx = |g: Formula| index[&g];

        let free: Vec<usize> = (0..base.len())
            .filter(|&i| matches!(base[i].kind(), Kind::Atom(_) | Kind::Next(_)))
            .collect();
        if free.len() > free_limit {
            return Err(GraphError::TooLarge {
                free: free.len(),
                limit: free_limit,
            });
        }
        let nexts: Vec<(usize, usize)> = base
            .iter()
            .enumerate()
            .filter_map(|(i, g)| match *g.kind() {
                Kind::Next(inner) => Some((i, idx(inner))),
                _ => None,
            })
            .collect();
        let eventualities: Vec<Eventuality> = base
            .iter()
            .enumerate()
            .filter_map(|(i, g)| match *g.kind() {
                Kind::Until(_, b) | Kind::Finally(b) => Some(Eventuality {
                    formula: i,
                    target: idx(b),
                    promise: Promise::Holds,
                }),
                Kind::Globally(a) => Some(Eventuality {
                    formula: i,
                    target: idx(a),
                    promise: Promise::Fails,
                }),
                _ => None,
            })
            .collect();

        // Base is ordered children-before-parents except for X-wrappers, which
        // are free, so one pass in index order evaluates everything.
        let x_of: HashMap<usize, usize> = nexts.iter().map(|&(x, inner)| (inner, x)).collect();
        let mut states = Vec::with_capacity(1 << free.len());
        for bits in 0u64..(1u64 << free.len()) {
            let mut v = vec![false; base.len()];
            for (k, &i) in free.iter().enumerate() {
                v[i] = bits >> k & 1 == 1;
            }
            for i in 0..base.len() {
                v[i] = match *base[i].kind() {
                    Kind::Atom(_) | Kind::Next(_) => v[i],
                    Kind::True => true,
                    Kind::False => false,
                    Kind::Not(a) => !v[idx(a)],
                    Kind::And(a, b) => v[idx(a)] && v[idx(b)],
                    Kind::Or(a, b) => v[idx(a)] || v[idx(b)],
                    Kind::Implies(a, b) => !v[idx(a)] || v[idx(b)],
                    Kind::Iff(a, b) => v[idx(a)] == v[idx(b)],
                    Kind::Until(a, b) => v[idx(b)] || (v[idx(a)] && v[x_of[&i]]),
                    Kind::Finally(a) => v[idx(a)] || v[x_of[&i]],
                    Kind::Globally(a) => v[idx(a)] && v[x_of[&i]],
                };
            }
            states.push(v);
        }

        let mut by_current: HashMap<Vec<bool>, Vec<usize>> = HashMap::new();
        for (s, v) in states.iter().enumerate() {
            let key = nexts.iter().map(|&(_, inner)| v[inner]).collect();
            by_current.entry(key).or_default().push(s);
        }
        let alive = vec![true; states.len()];
        let mut g = GraphTableau {
            root: idx(f),
            base,
            nexts,
            eventualities,
            states,
            by_current,
            alive,
        };
        g.eliminate();
        Ok(g)
    }

    fn requirement(&self, s: usize) -> Vec<bool> {
        self.nexts.iter().map(|&(x, _)| self.states[s][x]).collect()
    }

    fn successors(&self, s: usize) -> &[usize] {
        self.by_current
            .get(&self.requirement(s))
            .map_or(&[], Vec::as_slice)
    }

    fn promised(&self, e: &Eventuality, s: usize) -> bool {
        let v = self.states[s][e.formula];
        match e.promise {
            Promise::Holds => v,
            Promise::Fails => !v,
        }
    }

    fn reaches_target(&self, e: &Eventuality, s: usize) -> bool {
        let v = self.states[s][e.target];
        match e.promise {
            Promise::Holds => v,
            Promise::Fails => !v,
        }
    }

    fn eliminate(&mut self) {
        // Predecessors of every state in a `by_current` group are the states
        // whose requirement is that group's key.
        let mut by_requirement: HashMap<Vec<bool>, Vec<usize>> = HashMap::new();
        for s in 0..self.states.len() {
            by_requirement.entry(self.requirement(s)).or_default().push(s);
        }
        loop {
            let mut changed = false;
            for s in 0..self.states.len() {
                if self.alive[s] && !self.successors(s).iter().any(|&t| self.alive[t]) {
                    self.alive[s] = false;
                    changed = true;
                }
            }
            for e in self.eventualities.clone() {
                let mut reached = vec![false; self.states.len()];
                let mut queue: VecDeque<usize> = VecDeque::new();
                for (s, r) in reached.iter_mut().enumerate() {
                    if self.alive[s] && self.reaches_target(&e, s) {
                        *r = true;
                        queue.push_back(s);
                    }
                }
                let mut expanded: HashSet<Vec<bool>> = HashSet::new();
                while let Some(t) = queue.pop_front() {
                    let key: Vec<bool> =
                        self.nexts.iter().map(|&(_, inner)| self.states[t][inner]).collect();
                    if !expanded.insert(key.clone()) {
                        continue;
                    }
                    for &s in by_requirement.get(&key).map_or(&[][..], Vec::as_slice) {
                        if self.alive[s] && !reached[s] {
                            reached[s] = true;
                            queue.push_back(s);
                        }
                    }
                }
                for (s, &r) in reached.iter().enumerate() {
                    if self.alive[s] && self.promised(&e, s) && !r {
                        self.alive[s] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// Whether the root formula holds in some surviving state.
    pub fn satisfiable(&self) -> bool {
        self.initial_state().is_some()
    }

    fn initial_state(&self) -> Option<usize> {
        (0..self.states.len()).find(|&s| self.alive[s] && self.states[s][self.root])
    }

    /// Shortest alive path from an initial state to a state where `target`
    /// holds (inclusive of both ends).
    pub fn path_to(&self, target: Formula) -> Option<Vec<usize>> {
        let t = self.base.iter().position(|&g| g == target)?;
        let start = self.initial_state()?;
        self.bfs(start, |s| self.states[s][t], true)
    }

    fn bfs(&self, start: usize, goal: impl Fn(usize) -> bool, include_start: bool) -> Option<Vec<usize>> {
        if include_start && goal(start) {
            return Some(vec![start]);
        }
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        let mut seen = HashSet::from([start]);
        while let Some(s) = queue.pop_front() {
            for &t in self.successors(s) {
                if !self.alive[t] || !seen.insert(t) {
                    continue;
                }
                parent.insert(t, s);
                if goal(t) {
                    let mut path = vec![t];
                    let mut cur = t;
                    while let Some(&p) = parent.get(&cur) {
                        path.push(p);
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(t);
            }
        }
        None
    }

    fn atoms_of(&self, s: usize) -> Vec<String> {
        self.base
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.states[s][i])
            .filter_map(|(_, g)| g.atom_name().map(str::to_string))
            .collect()
    }

    /// A lasso through surviving states that satisfies the root formula.
    ///
    /// Walks from an initial state, always heading for the oldest unfulfilled
    /// eventuality along a shortest alive path, until a (state, pending
    /// obligations) pair repeats.
    pub fn witness(&self) -> Option<LassoModel> {
        let mut state = self.initial_state()?;
        let mut pending: Vec<usize> = Vec::new();
        let mut seen: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut path: Vec<usize> = Vec::new();
        loop {
            pending.retain(|&k| !self.reaches_target(&self.eventualities[k], state));
            for (k, e) in self.eventualities.iter().enumerate() {
                if self.promised(e, state) && !self.reaches_target(e, state) && !pending.contains(&k) {
                    pending.push(k);
                }
            }
            if let Some(&first) = seen.get(&(state, pending.clone())) {
                let atoms: Vec<Vec<String>> = path.iter().map(|&s| self.atoms_of(s)).collect();
                return LassoModel::new(atoms, first).ok();
            }
            seen.insert((state, pending.clone()), path.len());
            path.push(state);
            state = match pending.first() {
                Some(&k) => {
                    let e = self.eventualities[k];
                    self.bfs(state, |s| self.reaches_target(&e, s), false)?[1]
                }
                None => *self.successors(state).iter().find(|&&t| self.alive[t])?,
            };
        }
    }
}

/// Satisfiability of `f` by graph elimination, with the default size limit.
pub fn decide_graph(f: Formula) -> Result<bool, GraphError> {
    decide_graph_with_limit(f, DEFAULT_ELEMENTARY_LIMIT)
}

pub fn decide_graph_with_limit(f: Formula, free_limit: usize) -> Result<bool, GraphError> {
    Ok(GraphTableau::build(f, free_limit)?.satisfiable())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::oracle::evaluate;

    fn decide(text: &str) -> bool {
        decide_graph(parse_formula(text).unwrap()).unwrap()
    }

    #[test]
    fn textbook_verdicts() {
        for text in ["true", "p", "F p", "p & X p & F ~p", "G p", "a U b", "G F p & G F ~p"] {
            assert!(decide(text), "{text} should be satisfiable");
        }
        for text in ["false", "p & ~p", "F p & G ~p", "p & G(p -> X p) & F ~p", "G(p & q) & F ~p"] {
            assert!(!decide(text), "{text} should be unsatisfiable");
        }
    }

    #[test]
    fn until_has_a_witnessing_path() {
        let f = parse_formula("a U b").unwrap();
        let g = GraphTableau::build(f, DEFAULT_ELEMENTARY_LIMIT).unwrap();
        let path = g.path_to(Formula::atom("b")).unwrap();
        assert!(!path.is_empty());
        assert!(g.atoms_of(*path.last().unwrap()).contains(&"b".to_string()));
    }

    #[test]
    fn witnesses_satisfy_the_formula() {
        for text in ["G F p & G F q & G ~(p & q)", "a U b", "~G p & X X p", "(p U q) U r", "F G p"] {
            let f = parse_formula(text).unwrap();
            let g = GraphTableau::build(f, DEFAULT_ELEMENTARY_LIMIT).unwrap();
            let m = g.witness().unwrap();
            assert!(evaluate(&m, f).unwrap(), "{text}: {m:?}");
        }
    }

    #[test]
    fn size_limit() {
        let f = parse_formula("a & b & c").unwrap();
        assert_eq!(
            decide_graph_with_limit(f, 2),
            Err(GraphError::TooLarge { free: 3, limit: 2 })
        );
    }
}
