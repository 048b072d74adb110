//! Branches as persistent, parent-linked node chains.
//!
//! Each node records, for every eventuality target of the root's closure,
//! the position of the most recent node at or above it whose label contains
//! that target. This turns "is `b` in some label strictly after `u` and at or
//! before `v`" into a single comparison at `v`, which is all LOOP, PRUNE and
//! PRUNE0 ever ask.

use std::collections::HashMap;
use std::sync::Arc;

use crate::formula::{closure_set, ClosureSet, Formula};
use crate::label::Label;

/// Per-root data shared by every branch of one tableau.
#[derive(Debug, Clone)]
pub struct TableauContext {
    root: Formula,
    closure: ClosureSet,
    targets: Vec<Formula>,
    target_index: HashMap<Formula, u32>,
    x_eventuality_forms: usize,
}

impl TableauContext {
    pub fn new(root: Formula) -> TableauContext {
        let closure = closure_set(root);
        let targets = closure.eventuality_targets();
        let target_index = targets
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i as u32))
            .collect();
        let x_eventuality_forms = closure.x_eventualities().count();
        TableauContext {
            root,
            closure,
            targets,
            target_index,
            x_eventuality_forms,
        }
    }

    pub fn root(&self) -> Formula {
        self.root
    }

    pub fn closure(&self) -> &ClosureSet {
        &self.closure
    }

    /// Eventuality targets, indexed as in [`BranchNode::eventuality_targets`].
    pub fn targets(&self) -> &[Formula] {
        &self.targets
    }

    pub fn target_index(&self, f: Formula) -> Option<u32> {
        self.target_index.get(&f).copied()
    }

    /// Number of X-eventuality forms in the closure.
    pub fn x_eventuality_forms(&self) -> usize {
        self.x_eventuality_forms
    }

    /// Upper bound on how often one poised label may recur on a branch
    /// before the pruning rules must have cut it: `2^E + 2`.
    pub fn occurrence_cap(&self) -> u64 {
        1u64.checked_shl(self.x_eventuality_forms as u32)
            .map_or(u64::MAX, |c| c.saturating_add(2))
    }
}

/// One node of a branch.
#[derive(Debug)]
pub struct BranchNode {
    label: Label,
    position: usize,
    node_id: u64,
    poised: bool,
    poised_depth: usize,
    eventuality_targets: Box<[u32]>,
    last_seen: Arc<[u32]>,
    parent: Option<Arc<BranchNode>>,
    prev_poised: Option<Arc<BranchNode>>,
}

impl BranchNode {
    pub fn label(&self) -> &Label {
        &self.label
    }

    /// Index on the branch; the root is 0.
    pub fn position(&self) -> usize {
        self.position
    }

    /// Tableau-wide node identifier (trace node id).
    pub fn node_id(&self) -> u64 {
        self.node_id
    }

    pub fn is_poised(&self) -> bool {
        self.poised
    }

    /// Poised nodes from the root down to and including this one.
    pub fn poised_depth(&self) -> usize {
        self.poised_depth
    }

    /// Target indices of the X-eventualities in a poised label; empty otherwise.
    pub fn eventuality_targets(&self) -> &[u32] {
        &self.eventuality_targets
    }

    /// Whether `target` occurs in the label of some node `x` with
    /// `after < x.position <= self.position`.
    pub fn seen_after(&self, target: u32, after: usize) -> bool {
        self.last_seen[target as usize] as usize > after + 1
    }

    /// Targets present in this node's own label.
    pub fn targets_present(&self) -> impl Iterator<Item = u32> + '_ {
        self.last_seen
            .iter()
            .enumerate()
            .filter(|&(_, &seen)| seen as usize == self.position + 1)
            .map(|(t, _)| t as u32)
    }
}

impl Drop for BranchNode {
    // Long branches would otherwise drop recursively through `parent`.
    fn drop(&mut self) {
        self.prev_poised.take();
        let mut next = self.parent.take();
        while let Some(node) = next {
            match Arc::try_unwrap(node) {
                Ok(mut inner) => {
                    inner.prev_poised.take();
                    next = inner.parent.take();
                }
                Err(_) => break,
            }
        }
    }
}

/// Root-to-tip sequence of labelled nodes. Cloning shares the prefix.
#[derive(Debug, Clone)]
pub struct Branch(Arc<BranchNode>);

impl Branch {
    /// The single-node branch `{root}`.
    pub fn root(ctx: &TableauContext, node_id: u64) -> Branch {
        Branch::start(ctx, Label::singleton(ctx.root()), node_id)
    }

    /// A single-node branch with an arbitrary label.
    pub fn start(ctx: &TableauContext, label: Label, node_id: u64) -> Branch {
        Branch(Arc::new(make_node(ctx, label, node_id, None)))
    }

    /// Appends a child of the tip.
    pub fn extend(&self, ctx: &TableauContext, label: Label, node_id: u64) -> Branch {
        Branch(Arc::new(make_node(ctx, label, node_id, Some(&self.0))))
    }

    pub fn tip(&self) -> &BranchNode {
        &self.0
    }

    pub fn label(&self) -> &Label {
        &self.0.label
    }

    /// Number of nodes from the root to the tip.
    pub fn node_count(&self) -> usize {
        self.0.position + 1
    }

    pub fn parent(&self) -> Option<Branch> {
        self.0.parent.clone().map(Branch)
    }

    /// Poised proper ancestors of the tip, nearest first.
    pub fn poised_ancestors(&self) -> impl Iterator<Item = &BranchNode> + '_ {
        std::iter::successors(self.0.prev_poised.as_deref(), |n| n.prev_poised.as_deref())
    }

    /// Poised proper ancestors whose label equals the tip's, oldest first.
    pub fn repeats(&self) -> Vec<&BranchNode> {
        let mut found: Vec<&BranchNode> = self
            .poised_ancestors()
            .filter(|n| n.label == self.0.label)
            .collect();
        found.reverse();
        found
    }

    /// All nodes, root first.
    pub fn nodes(&self) -> Vec<&BranchNode> {
        let mut out: Vec<&BranchNode> =
            std::iter::successors(Some(&*self.0), |n| n.parent.as_deref()).collect();
        out.reverse();
        out
    }
}

fn make_node(
    ctx: &TableauContext,
    label: Label,
    node_id: u64,
    parent: Option<&Arc<BranchNode>>,
) -> BranchNode {
    let position = parent.map_or(0, |p| p.position + 1);
    let poised = label.is_poised();

    let present: Vec<u32> = label.iter().filter_map(|f| ctx.target_index(f)).collect();
    let last_seen = match parent {
        Some(p) if present.is_empty() => Arc::clone(&p.last_seen),
        _ => {
            let mut seen = match parent {
                Some(p) => p.last_seen.to_vec(),
                None => vec![0; ctx.targets().len()],
            };
            for t in present {
                seen[t as usize] = position as u32 + 1;
            }
            seen.into()
        }
    };

    let eventuality_targets = if poised {
        let mut ts: Vec<u32> = label
            .x_eventualities()
            .map(|f| {
                let target = f.eventuality_target().expect("x-eventuality has a target");
                ctx.target_index(target)
                    .expect("label formula outside the closure of the root")
            })
            .collect();
        ts.sort_unstable();
        ts.dedup();
        ts.into_boxed_slice()
    } else {
        Box::default()
    };

    let prev_poised = parent.and_then(|p| {
        if p.poised {
            Some(Arc::clone(p))
        } else {
            p.prev_poised.clone()
        }
    });
    let poised_depth = prev_poised.as_ref().map_or(0, |p| p.poised_depth) + usize::from(poised);

    BranchNode {
        label,
        position,
        node_id,
        poised,
        poised_depth,
        eventuality_targets,
        last_seen,
        parent: parent.cloned(),
        prev_poised,
    }
}
