//! Recorded tableau construction: one event per expanded node.

use std::fmt::Write as _;

use serde::Serialize;

use crate::formula::Formula;
use crate::label::Label;
use crate::rules::RuleId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome {
    Children(Vec<u64>),
    Tick,
    Cross,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub node_id: u64,
    pub parent_id: Option<u64>,
    pub label: Label,
    /// Poised nodes from the root down to and including this one.
    pub poised_depth: usize,
    pub rule: RuleId,
    pub principal: Option<Formula>,
    pub outcome: TraceOutcome,
    /// Node ids of the ancestors matched by LOOP, PRUNE or PRUNE0.
    pub evidence: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub root: Formula,
    /// Sorted by node id.
    pub events: Vec<TraceEvent>,
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum OutcomeView<'a> {
    Children(&'a [u64]),
    Tick,
    Cross,
}

#[derive(Serialize)]
struct EventView<'a> {
    node_id: u64,
    parent_id: Option<u64>,
    label: Vec<String>,
    poised: bool,
    depth: usize,
    rule: RuleId,
    principal: Option<String>,
    outcome: OutcomeView<'a>,
    evidence: &'a [u64],
}

#[derive(Serialize)]
struct TraceView<'a> {
    formula: String,
    events: Vec<EventView<'a>>,
}

impl Trace {
    pub fn event(&self, node_id: u64) -> Option<&TraceEvent> {
        self.events
            .binary_search_by_key(&node_id, |e| e.node_id)
            .ok()
            .map(|i| &self.events[i])
    }

    /// Number of times `rule` was applied.
    pub fn count(&self, rule: RuleId) -> usize {
        self.events.iter().filter(|e| e.rule == rule).count()
    }

    pub fn to_json(&self) -> String {
        let view = TraceView {
            formula: self.root.to_string(),
            events: self
                .events
                .iter()
                .map(|e| EventView {
                    node_id: e.node_id,
                    parent_id: e.parent_id,
                    label: e.label.formatted(),
                    poised: e.label.is_poised(),
                    depth: e.poised_depth,
                    rule: e.rule,
                    principal: e.principal.map(|p| p.to_string()),
                    outcome: match &e.outcome {
                        TraceOutcome::Children(c) => OutcomeView::Children(c),
                        TraceOutcome::Tick => OutcomeView::Tick,
                        TraceOutcome::Cross => OutcomeView::Cross,
                    },
                    evidence: &e.evidence,
                })
                .collect(),
        };
        serde_json::to_string(&view).expect("trace serialises")
    }

    /// Graphviz rendering. Poised nodes are double-ringed and TRANSITION
    /// edges are bold with an `=` label.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tableau {\n  node [shape=box, fontname=\"monospace\"];\n");
        for e in &self.events {
            let text = e.label.formatted().join(", ");
            let rings = if e.label.is_poised() { ", peripheries=2" } else { "" };
            let _ = writeln!(out, "  n{} [label=\"{}\"{}];", e.node_id, escape(&text), rings);
            match &e.outcome {
                TraceOutcome::Children(children) => {
                    for c in children {
                        let style = if e.rule == RuleId::Transition {
                            "style=bold, label=\"=\"".to_string()
                        } else {
                            format!("label=\"{}\"", e.rule)
                        };
                        let _ = writeln!(out, "  n{} -> n{} [{}];", e.node_id, c, style);
                    }
                }
                TraceOutcome::Tick | TraceOutcome::Cross => {
                    let mark = if e.outcome == TraceOutcome::Tick { "✓" } else { "×" };
                    let _ = writeln!(
                        out,
                        "  end{id} [shape=plaintext, label=\"{mark}\"];\n  n{id} -> end{id} [label=\"{rule}\"];",
                        id = e.node_id,
                        rule = e.rule
                    );
                }
            }
            for ev in &e.evidence {
                let _ = writeln!(
                    out,
                    "  n{} -> n{} [style=dashed, constraint=false];",
                    e.node_id, ev
                );
            }
        }
        // Children that were generated but never expanded.
        for e in &self.events {
            if let TraceOutcome::Children(children) = &e.outcome {
                for c in children.iter().filter(|c| self.event(**c).is_none()) {
                    let _ = writeln!(out, "  n{c} [label=\"…\", style=dotted];");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
