//! Lasso models: a finite prefix followed by one repeating period.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::branch::Branch;
use crate::rules::{RuleId, RuleOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("branch does not end in a tick (closing rule {0})")]
    NotTicked(RuleId),
    #[error("LOOP evidence does not name a poised ancestor")]
    BadLoopEvidence,
    #[error("malformed model: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct State {
    pub id: usize,
    pub atoms: Vec<String>,
}

/// Transition structure `(S, R, g)` whose only fullpath from state 0 is
/// `0, 1, .., N+M-1, N, N+1, ..`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoModel {
    pub states: Vec<State>,
    pub edges: Vec<(usize, usize)>,
    pub prefix_len: usize,
    pub period_len: usize,
}

impl LassoModel {
    /// Builds the lasso over `atoms` (one entry per state) looping back to
    /// state `prefix_len` after the last state.
    pub fn new<I, S>(atoms: I, prefix_len: usize) -> Result<LassoModel, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator,
        S::Item: Into<String>,
    {
        let states: Vec<State> = atoms
            .into_iter()
            .enumerate()
            .map(|(id, set)| {
                let atoms: BTreeSet<String> = set.into_iter().map(Into::into).collect();
                State {
                    id,
                    atoms: atoms.into_iter().collect(),
                }
            })
            .collect();
        let len = states.len();
        if prefix_len >= len {
            return Err(ModelError::Malformed(format!(
                "prefix length {prefix_len} leaves no period in {len} states"
            )));
        }
        let mut edges: Vec<(usize, usize)> = (0..len - 1).map(|i| (i, i + 1)).collect();
        edges.push((len - 1, prefix_len));
        Ok(LassoModel {
            states,
            edges,
            prefix_len,
            period_len: len - prefix_len,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// State visited at step `i` of the fullpath.
    pub fn state_at(&self, i: usize) -> usize {
        if i < self.prefix_len {
            i
        } else {
            (i - self.prefix_len) % self.period_len + self.prefix_len
        }
    }

    /// Successor of state `s` on the fullpath.
    pub fn successor(&self, s: usize) -> usize {
        if s + 1 < self.len() {
            s + 1
        } else {
            self.prefix_len
        }
    }

    pub fn holds(&self, state: usize, atom: &str) -> bool {
        self.states[state].atoms.binary_search_by(|a| a.as_str().cmp(atom)).is_ok()
    }

    /// Checks ids, sortedness and that the edges are exactly the lasso.
    pub fn validate(&self) -> Result<(), ModelError> {
        let len = self.len();
        if len == 0 || self.period_len == 0 || self.prefix_len + self.period_len != len {
            return Err(ModelError::Malformed(format!(
                "{len} states with prefix {} and period {}",
                self.prefix_len, self.period_len
            )));
        }
        for (i, s) in self.states.iter().enumerate() {
            if s.id != i {
                return Err(ModelError::Malformed(format!("state {i} has id {}", s.id)));
            }
            if s.atoms.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ModelError::Malformed(format!("atoms of state {i} not sorted")));
            }
        }
        let expected: Vec<(usize, usize)> = (0..len).map(|s| (s, self.successor(s))).collect();
        if self.edges != expected {
            return Err(ModelError::Malformed("edges do not form a lasso".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialises")
    }
}

/// Reads a model off a ticked branch.
///
/// States correspond to the poised nodes at which TRANSITION fired; each is
/// labelled with the atoms (not negated atoms) of its label. An EMPTY tick
/// adds a final empty state that loops to itself; a LOOP tick loops back to
/// the state of the matched ancestor.
pub fn extract_model(branch: &Branch, closing: &RuleOutcome) -> Result<LassoModel, ModelError> {
    let mut transitions: Vec<_> = branch.poised_ancestors().collect();
    transitions.reverse();
    let atoms_of = |node: &crate::branch::BranchNode| -> Vec<String> {
        node.label()
            .iter()
            .filter_map(|f| f.atom_name().map(str::to_string))
            .collect()
    };
    let mut states: Vec<Vec<String>> = transitions.iter().map(|n| atoms_of(n)).collect();
    match closing.rule {
        RuleId::Empty => {
            let prefix = states.len();
            states.push(Vec::new());
            LassoModel::new(states, prefix)
        }
        RuleId::Loop => {
            let &[target] = closing.evidence.as_slice() else {
                return Err(ModelError::BadLoopEvidence);
            };
            let back = transitions
                .iter()
                .position(|n| n.position() == target)
                .ok_or(ModelError::BadLoopEvidence)?;
            LassoModel::new(states, back)
        }
        other => Err(ModelError::NotTicked(other)),
    }
}
