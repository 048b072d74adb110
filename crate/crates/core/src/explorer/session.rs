use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

use crate::branch::{Branch, TableauContext};
use crate::formula::{parse_formula, Formula, ParseError};
use crate::model::{extract_model, LassoModel};
use crate::rules::{self, Outcome, RuleId, RuleOutcome};
use crate::search::{search_from, SearchError, SearchOptions, SearchResult, SearchStats, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplorerError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("no session {0}")]
    UnknownSession(String),
    #[error("no node {0}")]
    UnknownNode(u64),
    #[error("node {0} is not an open leaf")]
    NotOpen(u64),
    #[error("stale move: tree is at revision {current}, move was made against {given}")]
    Stale { current: u64, given: u64 },
    #[error("{rule} on {principal} is not a legal move at node {node}")]
    IllegalMove {
        node: u64,
        rule: RuleId,
        principal: String,
    },
    #[error("nothing to undo")]
    NothingToUndo,
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeStatus {
    Open,
    Tick,
    Cross,
}

/// A legal (rule, principal) pair at an open leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Move {
    pub rule: RuleId,
    pub principal: Option<String>,
    /// Intern key of the principal formula.
    pub principal_key: Option<u32>,
}

/// A move as chosen by a client. The principal may be given by key or by
/// text; `revision`, when present, must match the current tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
pub struct MoveRequest {
    pub rule: String,
    #[serde(default)]
    pub principal: Option<PrincipalRef>,
    #[serde(default)]
    pub revision: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum PrincipalRef {
    Key(u32),
    Text(String),
}

#[derive(Debug)]
struct Node {
    parent: Option<u64>,
    branch: Branch,
    applied: Option<RuleOutcome>,
    children: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeView {
    pub id: u64,
    pub parent: Option<u64>,
    pub label: Vec<String>,
    /// Intern keys of the label formulas, in label order.
    pub keys: Vec<u32>,
    pub poised: bool,
    pub rule: Option<RuleId>,
    pub principal: Option<String>,
    pub children: Vec<u64>,
    pub status: NodeStatus,
    /// Node ids of the ancestors matched by LOOP, PRUNE or PRUNE0.
    pub evidence: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeView {
    pub id: String,
    pub formula: String,
    pub revision: u64,
    pub status: NodeStatus,
    pub open: Vec<u64>,
    pub nodes: Vec<NodeView>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApplyResult {
    pub node: NodeView,
    /// Open leaves of the whole tree after the move.
    pub open: Vec<u64>,
    pub model: Option<LassoModel>,
}

/// A manually built tableau. Node ids are dense and children are always
/// appended, so undoing the latest move is a truncation.
#[derive(Debug)]
pub struct Session {
    id: Uuid,
    ctx: TableauContext,
    nodes: Vec<Node>,
    undo_log: Vec<u64>,
    use_prune0: bool,
}

impl Session {
    pub fn new(formula_text: &str) -> Result<Session, ExplorerError> {
        Ok(Session::from_formula(parse_formula(formula_text)?))
    }

    pub fn from_formula(f: Formula) -> Session {
        let ctx = TableauContext::new(f);
        let root = Branch::root(&ctx, 0);
        Session {
            id: Uuid::new_v4(),
            ctx,
            nodes: vec![Node {
                parent: None,
                branch: root,
                applied: None,
                children: Vec::new(),
            }],
            undo_log: Vec::new(),
            use_prune0: true,
        }
    }

    /// Whether poised nodes may be crossed by PRUNE0 (on by default).
    pub fn set_prune0(&mut self, enabled: bool) {
        self.use_prune0 = enabled;
    }

    pub fn id(&self) -> Uuid {
        self.id
    }

    pub fn root(&self) -> Formula {
        self.ctx.root()
    }

    /// Number of moves currently applied; undo steps it back.
    pub fn revision(&self) -> u64 {
        self.undo_log.len() as u64
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn node(&self, id: u64) -> Result<&Node, ExplorerError> {
        self.nodes.get(id as usize).ok_or(ExplorerError::UnknownNode(id))
    }

    pub fn open_leaves(&self) -> Vec<u64> {
        (0..self.nodes.len() as u64)
            .filter(|&id| self.nodes[id as usize].applied.is_none())
            .collect()
    }

    fn outcomes(&self, id: u64) -> Result<Vec<RuleOutcome>, ExplorerError> {
        let node = self.node(id)?;
        if node.applied.is_some() {
            return Err(ExplorerError::NotOpen(id));
        }
        let moves = rules::static_moves(node.branch.label());
        if !moves.is_empty() {
            return Ok(moves);
        }
        Ok(vec![rules::apply_poised(&node.branch, self.use_prune0)])
    }

    /// Legal moves at an open leaf, in the order the automatic solver ranks
    /// them. A poised leaf has exactly one.
    pub fn list_moves(&self, id: u64) -> Result<Vec<Move>, ExplorerError> {
        Ok(self
            .outcomes(id)?
            .iter()
            .map(|o| Move {
                rule: o.rule,
                principal: o.principal.map(|p| p.to_string()),
                principal_key: o.principal.map(|p| p.id()),
            })
            .collect())
    }

    pub fn apply_move(&mut self, id: u64, request: &MoveRequest) -> Result<ApplyResult, ExplorerError> {
        if let Some(given) = request.revision {
            if given != self.revision() {
                return Err(ExplorerError::Stale {
                    current: self.revision(),
                    given,
                });
            }
        }
        let rule: RuleId = request.rule.parse().map_err(|_| ExplorerError::IllegalMove {
            node: id,
            rule: RuleId::Transition,
            principal: request.rule.clone(),
        })?;
        let matches = |o: &RuleOutcome| {
            o.rule == rule
                && match (&request.principal, o.principal) {
                    (None, _) => true,
                    (Some(PrincipalRef::Key(k)), Some(p)) => p.id() == *k,
                    (Some(PrincipalRef::Text(t)), Some(p)) => {
                        parse_formula(t).is_ok_and(|parsed| parsed == p)
                    }
                    (Some(_), None) => false,
                }
        };
        let outcome = self
            .outcomes(id)?
            .into_iter()
            .find(matches)
            .ok_or_else(|| ExplorerError::IllegalMove {
                node: id,
                rule,
                principal: match &request.principal {
                    Some(PrincipalRef::Key(k)) => format!("#{k}"),
                    Some(PrincipalRef::Text(t)) => t.clone(),
                    None => "-".into(),
                },
            })?;
        Ok(self.apply_outcome(id, outcome))
    }

    fn apply_outcome(&mut self, id: u64, outcome: RuleOutcome) -> ApplyResult {
        let branch = self.nodes[id as usize].branch.clone();
        let mut model = None;
        let mut children = Vec::new();
        match &outcome.outcome {
            Outcome::Children(labels) => {
                for label in labels {
                    let child = self.nodes.len() as u64;
                    self.nodes.push(Node {
                        parent: Some(id),
                        branch: branch.extend(&self.ctx, label.clone(), child),
                        applied: None,
                        children: Vec::new(),
                    });
                    children.push(child);
                }
            }
            Outcome::Tick => {
                model = Some(extract_model(&branch, &outcome).expect("ticked branch yields a model"));
            }
            Outcome::Cross => {}
        }
        let node = &mut self.nodes[id as usize];
        node.applied = Some(outcome);
        node.children = children;
        self.undo_log.push(id);
        ApplyResult {
            node: self.node_view(id),
            open: self.open_leaves(),
            model,
        }
    }

    /// Reverts the latest applied move exactly.
    pub fn undo(&mut self) -> Result<TreeView, ExplorerError> {
        let id = self.undo_log.pop().ok_or(ExplorerError::NothingToUndo)?;
        let node = &mut self.nodes[id as usize];
        let removed = node.children.len();
        node.children.clear();
        node.applied = None;
        self.nodes.truncate(self.nodes.len() - removed);
        Ok(self.tree())
    }

    /// Completes every open leaf with the automatic procedure. The session
    /// itself is left as it was.
    pub fn auto_run(&self, opts: &SearchOptions) -> Result<Verdict, ExplorerError> {
        for node in &self.nodes {
            if let Some(o @ RuleOutcome { outcome: Outcome::Tick, .. }) = &node.applied {
                return Ok(Verdict {
                    result: SearchResult::Sat {
                        model: extract_model(&node.branch, o).expect("ticked branch yields a model"),
                        branch: node.branch.clone(),
                        closing: o.clone(),
                    },
                    stats: SearchStats::default(),
                    trace: None,
                });
            }
        }
        let open: Vec<Branch> = self
            .open_leaves()
            .into_iter()
            .map(|id| self.nodes[id as usize].branch.clone())
            .collect();
        if open.is_empty() {
            return Ok(Verdict {
                result: SearchResult::Unsat,
                stats: SearchStats::default(),
                trace: None,
            });
        }
        let opts = SearchOptions {
            use_prune0: self.use_prune0,
            ..opts.clone()
        };
        Ok(search_from(&self.ctx, open, self.nodes.len() as u64, 1, &opts)?)
    }

    fn status(&self, id: u64) -> NodeStatus {
        let node = &self.nodes[id as usize];
        match &node.applied {
            None => NodeStatus::Open,
            Some(o) => match o.outcome {
                Outcome::Tick => NodeStatus::Tick,
                Outcome::Cross => NodeStatus::Cross,
                Outcome::Children(_) => {
                    let statuses: Vec<NodeStatus> = node.children.iter().map(|&c| self.status(c)).collect();
                    if statuses.contains(&NodeStatus::Tick) {
                        NodeStatus::Tick
                    } else if statuses.iter().all(|&s| s == NodeStatus::Cross) {
                        NodeStatus::Cross
                    } else {
                        NodeStatus::Open
                    }
                }
            },
        }
    }

    pub fn node_view(&self, id: u64) -> NodeView {
        let node = &self.nodes[id as usize];
        let label = node.branch.label();
        let evidence = match &node.applied {
            Some(o) if !o.evidence.is_empty() => {
                let path = node.branch.nodes();
                o.evidence.iter().map(|&pos| path[pos].node_id()).collect()
            }
            _ => Vec::new(),
        };
        NodeView {
            id,
            parent: node.parent,
            label: label.formatted(),
            keys: label.iter().map(|f| f.id()).collect(),
            poised: label.is_poised(),
            rule: node.applied.as_ref().map(|o| o.rule),
            principal: node
                .applied
                .as_ref()
                .and_then(|o| o.principal)
                .map(|p| p.to_string()),
            children: node.children.clone(),
            status: self.status(id),
            evidence,
        }
    }

    pub fn get_node(&self, id: u64) -> Result<NodeView, ExplorerError> {
        self.node(id)?;
        Ok(self.node_view(id))
    }

    pub fn tree(&self) -> TreeView {
        TreeView {
            id: self.id.to_string(),
            formula: self.root().to_string(),
            revision: self.revision(),
            status: self.status(0),
            open: self.open_leaves(),
            nodes: (0..self.nodes.len() as u64).map(|id| self.node_view(id)).collect(),
        }
    }
}
