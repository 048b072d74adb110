//! The twenty-five tableau rules.
//!
//! Static rules look at one label. LOOP, PRUNE, PRUNE0 and TRANSITION apply
//! only to poised labels and are tried in that order; the first three also
//! read the branch above the node.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::branch::{Branch, BranchNode};
use crate::formula::{Formula, Kind};
use crate::label::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RuleId {
    Empty,
    Top,
    Bot,
    And,
    Or,
    Implies,
    Iff,
    Until,
    Finally,
    Globally,
    Contradiction,
    NotNot,
    NotBot,
    NotTop,
    NotAnd,
    NotOr,
    NotImplies,
    NotIff,
    NotUntil,
    NotGlobally,
    NotFinally,
    Loop,
    Prune,
    Prune0,
    Transition,
}

impl RuleId {
    pub const ALL: [RuleId; 25] = [
        RuleId::Empty,
        RuleId::Top,
        RuleId::Bot,
        RuleId::And,
        RuleId::Or,
        RuleId::Implies,
        RuleId::Iff,
        RuleId::Until,
        RuleId::Finally,
        RuleId::Globally,
        RuleId::Contradiction,
        RuleId::NotNot,
        RuleId::NotBot,
        RuleId::NotTop,
        RuleId::NotAnd,
        RuleId::NotOr,
        RuleId::NotImplies,
        RuleId::NotIff,
        RuleId::NotUntil,
        RuleId::NotGlobally,
        RuleId::NotFinally,
        RuleId::Loop,
        RuleId::Prune,
        RuleId::Prune0,
        RuleId::Transition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Empty => "EMPTY",
            RuleId::Top => "TOP",
            RuleId::Bot => "BOT",
            RuleId::And => "AND",
            RuleId::Or => "OR",
            RuleId::Implies => "IMPLIES",
            RuleId::Iff => "IFF",
            RuleId::Until => "UNTIL",
            RuleId::Finally => "FINALLY",
            RuleId::Globally => "GLOBALLY",
            RuleId::Contradiction => "CONTRADICTION",
            RuleId::NotNot => "NOTNOT",
            RuleId::NotBot => "NOTBOT",
            RuleId::NotTop => "NOTTOP",
            RuleId::NotAnd => "NOTAND",
            RuleId::NotOr => "NOTOR",
            RuleId::NotImplies => "NOTIMPLIES",
            RuleId::NotIff => "NOTIFF",
            RuleId::NotUntil => "NOTUNTIL",
            RuleId::NotGlobally => "NOTGLOBALLY",
            RuleId::NotFinally => "NOTFINALLY",
            RuleId::Loop => "LOOP",
            RuleId::Prune => "PRUNE",
            RuleId::Prune0 => "PRUNE0",
            RuleId::Transition => "TRANSITION",
        }
    }

    /// Rules that only apply to poised labels and read the branch.
    pub fn is_static(self) -> bool {
        !matches!(
            self,
            RuleId::Loop | RuleId::Prune | RuleId::Prune0 | RuleId::Transition
        )
    }

    /// Selection rank among decomposition rules: non-branching first.
    fn rank(self) -> u8 {
        match self {
            RuleId::Top | RuleId::NotBot => 0,
            RuleId::NotNot => 1,
            RuleId::And => 2,
            RuleId::NotOr => 3,
            RuleId::NotImplies => 4,
            RuleId::Globally => 5,
            RuleId::NotFinally => 6,
            RuleId::Or => 10,
            RuleId::Implies => 11,
            RuleId::Iff => 12,
            RuleId::Until => 13,
            RuleId::Finally => 14,
            RuleId::NotAnd => 15,
            RuleId::NotIff => 16,
            RuleId::NotUntil => 17,
            RuleId::NotGlobally => 18,
            _ => u8::MAX,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Tick,
    Cross,
    Children(Vec<Label>),
}

/// Result of applying one rule at one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleOutcome {
    pub rule: RuleId,
    pub principal: Option<Formula>,
    pub outcome: Outcome,
    /// Branch positions of the matched ancestors (LOOP: `u`; PRUNE: `u, v`;
    /// PRUNE0: `u`).
    pub evidence: Vec<usize>,
}

impl RuleOutcome {
    fn new(rule: RuleId, principal: Option<Formula>, outcome: Outcome) -> RuleOutcome {
        RuleOutcome {
            rule,
            principal,
            outcome,
            evidence: Vec::new(),
        }
    }

    fn with_evidence(mut self, evidence: Vec<usize>) -> RuleOutcome {
        self.evidence = evidence;
        self
    }
}

/// How the principal formula of a static step is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrincipalPolicy {
    /// Non-branching rules first, then branching; ties by intern key.
    #[default]
    Priority,
    /// Pseudo-random choice keyed on the seed and the label contents.
    Seeded(u64),
}

/// Classifies a non-elementary formula by the static rule that decomposes it.
pub fn static_rule_for(f: Formula) -> Option<RuleId> {
    let rule = match *f.kind() {
        Kind::Atom(_) | Kind::Next(_) => return None,
        Kind::True => RuleId::Top,
        Kind::False => RuleId::Bot,
        Kind::And(..) => RuleId::And,
        Kind::Or(..) => RuleId::Or,
        Kind::Implies(..) => RuleId::Implies,
        Kind::Iff(..) => RuleId::Iff,
        Kind::Until(..) => RuleId::Until,
        Kind::Finally(_) => RuleId::Finally,
        Kind::Globally(_) => RuleId::Globally,
        Kind::Not(inner) => match *inner.kind() {
            Kind::Atom(_) | Kind::Next(_) => return None,
            Kind::True => RuleId::NotTop,
            Kind::False => RuleId::NotBot,
            Kind::Not(_) => RuleId::NotNot,
            Kind::And(..) => RuleId::NotAnd,
            Kind::Or(..) => RuleId::NotOr,
            Kind::Implies(..) => RuleId::NotImplies,
            Kind::Iff(..) => RuleId::NotIff,
            Kind::Until(..) => RuleId::NotUntil,
            Kind::Finally(_) => RuleId::NotFinally,
            Kind::Globally(_) => RuleId::NotGlobally,
        },
    };
    Some(rule)
}

/// Up to two formulas a static rule adds to one child.
#[derive(Clone, Copy)]
struct Added {
    items: [Formula; 2],
    len: usize,
}

impl Added {
    fn of(items: &[Formula]) -> Added {
        let mut out = Added {
            items: [Formula::top(); 2],
            len: items.len(),
        };
        out.items[..items.len()].copy_from_slice(items);
        out
    }

    fn as_slice(&self) -> &[Formula] {
        &self.items[..self.len]
    }
}

enum Expansion {
    Cross,
    One(Added),
    Two(Added, Added),
}

/// The static rule table: what each child of `principal` gains.
fn expansion(principal: Formula) -> Expansion {
    let one = |added: &[Formula]| Expansion::One(Added::of(added));
    let two = |left: &[Formula], right: &[Formula]| Expansion::Two(Added::of(left), Added::of(right));
    match *principal.kind() {
        Kind::True => one(&[]),
        Kind::False => Expansion::Cross,
        Kind::And(a, b) => one(&[a, b]),
        Kind::Or(a, b) => two(&[a], &[b]),
        Kind::Implies(a, b) => two(&[a.not()], &[b]),
        Kind::Iff(a, b) => two(&[a, b], &[a.not(), b.not()]),
        Kind::Until(a, b) => two(&[b], &[a, principal.next()]),
        Kind::Finally(a) => two(&[a], &[principal.next()]),
        Kind::Globally(a) => one(&[a, principal.next()]),
        Kind::Not(inner) => match *inner.kind() {
            Kind::True => Expansion::Cross,
            Kind::False => one(&[]),
            Kind::Not(a) => one(&[a]),
            Kind::And(a, b) => two(&[a.not()], &[b.not()]),
            Kind::Or(a, b) => one(&[a.not(), b.not()]),
            Kind::Implies(a, b) => one(&[a, b.not()]),
            Kind::Iff(a, b) => two(&[a, b.not()], &[a.not(), b]),
            Kind::Until(a, b) => two(&[a.not(), b.not()], &[b.not(), principal.next()]),
            Kind::Finally(a) => one(&[a.not(), principal.next()]),
            Kind::Globally(a) => two(&[a.not()], &[principal.next()]),
            Kind::Atom(_) | Kind::Next(_) => unreachable!("elementary"),
        },
        Kind::Atom(_) | Kind::Next(_) => unreachable!("elementary"),
    }
}

/// [`expansion`] in the context of `label`.
///
/// A child that adds nothing beyond the rest of the label is satisfied by
/// every model of the label, so a branching rule degenerates to that child.
/// For eventualities only the fulfilling (left) child may absorb the other.
fn expansion_in(label: &Label, rule: RuleId, principal: Formula) -> Expansion {
    match expansion(principal) {
        Expansion::Two(left, right) => {
            let redundant = |added: &Added| added.as_slice().iter().all(|&g| label.contains(g));
            let eventuality = matches!(rule, RuleId::Until | RuleId::Finally | RuleId::NotGlobally);
            if redundant(&left) {
                Expansion::One(left)
            } else if redundant(&right) && !eventuality {
                Expansion::One(right)
            } else {
                Expansion::Two(left, right)
            }
        }
        other => other,
    }
}

/// Applies the static rule for `principal` to `label`.
///
/// Returns `None` if `principal` is not in the label or is elementary.
pub fn decompose(label: &Label, principal: Formula) -> Option<RuleOutcome> {
    if !label.contains(principal) {
        return None;
    }
    let rule = static_rule_for(principal)?;
    let child = |added: &Added| label.consume(principal, added.as_slice());
    let outcome = match expansion_in(label, rule, principal) {
        Expansion::Cross => Outcome::Cross,
        Expansion::One(added) => Outcome::Children(vec![child(&added)]),
        Expansion::Two(left, right) => Outcome::Children(vec![child(&left), child(&right)]),
    };
    Some(RuleOutcome::new(rule, Some(principal), outcome))
}

/// EMPTY, BOT, NOTTOP or CONTRADICTION, whichever applies first.
fn terminal_static(label: &Label) -> Option<RuleOutcome> {
    if label.is_empty() {
        return Some(RuleOutcome::new(RuleId::Empty, None, Outcome::Tick));
    }
    let bottom = Formula::bottom();
    if label.contains(bottom) {
        return Some(RuleOutcome::new(RuleId::Bot, Some(bottom), Outcome::Cross));
    }
    let not_top = Formula::top().not();
    if label.contains(not_top) {
        return Some(RuleOutcome::new(RuleId::NotTop, Some(not_top), Outcome::Cross));
    }
    label.contradiction().map(|negative| {
        let positive = negative.negated().expect("contradiction is a negation");
        RuleOutcome::new(RuleId::Contradiction, Some(positive), Outcome::Cross)
    })
}

fn seeded_index(seed: u64, label: &Label, n: usize) -> usize {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    seed.hash(&mut h);
    for f in label.iter() {
        f.id().hash(&mut h);
    }
    (h.finish() % n as u64) as usize
}

/// Whether adding `g` to `label` closes the child at once.
fn clashes(label: &Label, g: Formula) -> bool {
    g == Formula::bottom()
        || label.contains(g.not())
        || g.negated().is_some_and(|positive| label.contains(positive))
}

/// Ordering key of a decomposable formula under [`PrincipalPolicy::Priority`]:
/// non-branching rules first; among branching ones, fewest children that
/// survive an immediate clash; then rule rank and intern key.
fn priority_key(label: &Label, f: Formula) -> Option<(bool, usize, u8, Formula)> {
    let rule = static_rule_for(f)?;
    if f == Formula::bottom() || f == Formula::top().not() {
        return None;
    }
    let Expansion::Two(left, right) = expansion_in(label, rule, f) else {
        return Some((false, 0, rule.rank(), f));
    };
    let open = [left, right]
        .iter()
        .filter(|added| {
            !added
                .as_slice()
                .iter()
                .any(|&g| !label.contains(g) && clashes(label, g))
        })
        .count();
    Some((true, open, rule.rank(), f))
}

/// Chooses and applies a static rule, or returns `None` when `label` is
/// poised.
pub fn apply_static(label: &Label, policy: PrincipalPolicy) -> Option<RuleOutcome> {
    if let Some(done) = terminal_static(label) {
        return Some(done);
    }
    let principal = match policy {
        PrincipalPolicy::Priority => label
            .iter()
            .filter_map(|f| priority_key(label, f))
            .min()
            .map(|(.., f)| f)?,
        PrincipalPolicy::Seeded(seed) => {
            let candidates: Vec<Formula> =
                label.iter().filter(|f| !f.is_elementary()).collect();
            if candidates.is_empty() {
                return None;
            }
            candidates[seeded_index(seed, label, candidates.len())]
        }
    };
    decompose(label, principal)
}

/// Every legal static move at `label`, in the order [`apply_static`] with
/// [`PrincipalPolicy::Priority`] would rank them: closing rules first, then
/// decompositions by rule rank and intern key.
pub fn static_moves(label: &Label) -> Vec<RuleOutcome> {
    if label.is_empty() {
        return vec![RuleOutcome::new(RuleId::Empty, None, Outcome::Tick)];
    }
    let mut moves = Vec::new();
    if label.contains(Formula::bottom()) {
        moves.push(RuleOutcome::new(RuleId::Bot, Some(Formula::bottom()), Outcome::Cross));
    }
    let not_top = Formula::top().not();
    if label.contains(not_top) {
        moves.push(RuleOutcome::new(RuleId::NotTop, Some(not_top), Outcome::Cross));
    }
    let mut contradictions: Vec<Formula> = label
        .iter()
        .filter(|f| label.contains(f.not()))
        .collect();
    contradictions.sort_unstable();
    for positive in contradictions {
        moves.push(RuleOutcome::new(RuleId::Contradiction, Some(positive), Outcome::Cross));
    }
    let mut decomposable: Vec<_> = label.iter().filter_map(|f| priority_key(label, f)).collect();
    decomposable.sort_unstable();
    moves.extend(decomposable.into_iter().filter_map(|(.., f)| decompose(label, f)));
    moves
}

/// Carries the `X`-nested content to the next time point.
pub fn transition(label: &Label) -> Label {
    Label::new(label.iter().filter_map(|f| match *f.kind() {
        Kind::Next(a) => Some(a),
        Kind::Not(inner) => match *inner.kind() {
            Kind::Next(a) => Some(a.not()),
            _ => None,
        },
        _ => None,
    }))
}

fn all_fulfilled(targets: &[u32], at: &BranchNode, after: usize) -> bool {
    targets.iter().all(|&t| at.seen_after(t, after))
}

/// LOOP: the tip is poised and some poised proper ancestor `u` has a
/// superset label whose X-eventualities are all fulfilled strictly below `u`
/// and at or above the tip. Reports the nearest such `u`.
pub fn loop_check(branch: &Branch) -> Option<RuleOutcome> {
    let tip = branch.tip();
    if !tip.is_poised() {
        return None;
    }
    branch
        .poised_ancestors()
        .find(|u| {
            u.label().is_superset_of(tip.label())
                && all_fulfilled(u.eventuality_targets(), tip, u.position())
        })
        .map(|u| {
            RuleOutcome::new(RuleId::Loop, None, Outcome::Tick).with_evidence(vec![u.position()])
        })
}

/// PRUNE: the tip `w` repeats a poised label seen at `u < v`, and every
/// eventuality target fulfilled in `(v, w]` was already fulfilled in `(u, v]`.
pub fn prune_check(branch: &Branch) -> Option<RuleOutcome> {
    let w = branch.tip();
    if !w.is_poised() {
        return None;
    }
    let repeats = branch.repeats();
    if repeats.len() < 2 {
        return None;
    }
    let targets = w.eventuality_targets();
    let useless = |u: &BranchNode, v: &BranchNode| {
        targets
            .iter()
            .all(|&t| !w.seen_after(t, v.position()) || v.seen_after(t, u.position()))
    };
    let consecutive = repeats.windows(2).map(|pair| (pair[0], pair[1]));
    let all_pairs = repeats.iter().enumerate().flat_map(|(i, &u)| {
        repeats[i + 1..].iter().map(move |&v| (u, v))
    });
    consecutive
        .chain(all_pairs)
        .find(|(u, v)| useless(u, v))
        .map(|(u, v)| {
            RuleOutcome::new(RuleId::Prune, None, Outcome::Cross)
                .with_evidence(vec![u.position(), v.position()])
        })
}

/// PRUNE0: the tip repeats a poised label carrying at least one
/// X-eventuality, and nothing was fulfilled since that earlier occurrence.
pub fn prune0_check(branch: &Branch) -> Option<RuleOutcome> {
    let v = branch.tip();
    if !v.is_poised() || v.eventuality_targets().is_empty() {
        return None;
    }
    branch
        .repeats()
        .into_iter()
        .rev()
        .find(|u| {
            !v.eventuality_targets()
                .iter()
                .any(|&t| v.seen_after(t, u.position()))
        })
        .map(|u| {
            RuleOutcome::new(RuleId::Prune0, None, Outcome::Cross)
                .with_evidence(vec![u.position()])
        })
}

/// Non-static step for a poised tip: LOOP, then PRUNE, then PRUNE0 (when
/// enabled), then TRANSITION.
pub fn apply_poised(branch: &Branch, use_prune0: bool) -> RuleOutcome {
    debug_assert!(branch.tip().is_poised());
    loop_check(branch)
        .or_else(|| prune_check(branch))
        .or_else(|| use_prune0.then(|| prune0_check(branch)).flatten())
        .unwrap_or_else(|| {
            RuleOutcome::new(
                RuleId::Transition,
                None,
                Outcome::Children(vec![transition(branch.label())]),
            )
        })
}

/// Applies whichever rule the automatic procedure would use at the tip.
pub fn step(branch: &Branch, policy: PrincipalPolicy, use_prune0: bool) -> RuleOutcome {
    apply_static(branch.label(), policy).unwrap_or_else(|| apply_poised(branch, use_prune0))
}

/// Progress measure for static steps: the sum of decomposition weights of
/// the non-elementary members. Every static rule producing children makes
/// each child strictly lighter than its parent.
pub fn static_weight(label: &Label) -> u64 {
    label
        .iter()
        .filter(|f| !f.is_elementary())
        .map(decomposition_weight)
        .sum()
}

/// Weight of a formula as a static-rule principal.
pub fn decomposition_weight(f: Formula) -> u64 {
    positive_weight(f)
}

fn positive_weight(f: Formula) -> u64 {
    match *f.kind() {
        Kind::Atom(_) | Kind::True | Kind::False | Kind::Next(_) => 1,
        Kind::Not(a) => negative_weight(a),
        Kind::And(a, b) | Kind::Until(a, b) => positive_weight(a) + positive_weight(b) + 1,
        Kind::Or(a, b) => positive_weight(a).max(positive_weight(b)) + 1,
        Kind::Implies(a, b) => negative_weight(a).max(positive_weight(b)) + 1,
        Kind::Iff(a, b) => {
            (positive_weight(a) + positive_weight(b)).max(negative_weight(a) + negative_weight(b))
                + 1
        }
        Kind::Finally(a) | Kind::Globally(a) => positive_weight(a) + 1,
    }
}

fn negative_weight(f: Formula) -> u64 {
    match *f.kind() {
        Kind::Atom(_) | Kind::True | Kind::False | Kind::Next(_) => 1,
        Kind::Not(a) => positive_weight(a) + 1,
        Kind::And(a, b) => negative_weight(a).max(negative_weight(b)) + 1,
        Kind::Or(a, b) | Kind::Until(a, b) => negative_weight(a) + negative_weight(b) + 1,
        Kind::Implies(a, b) => positive_weight(a) + negative_weight(b) + 1,
        Kind::Iff(a, b) => {
            (positive_weight(a) + negative_weight(b)).max(negative_weight(a) + positive_weight(b))
                + 1
        }
        Kind::Finally(a) | Kind::Globally(a) => negative_weight(a) + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::TableauContext;
    use crate::formula::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn label(texts: &[&str]) -> Label {
        Label::new(texts.iter().map(|t| f(t)))
    }

    fn children(outcome: &RuleOutcome) -> &[Label] {
        match &outcome.outcome {
            Outcome::Children(c) => c,
            other => panic!("expected children, got {other:?}"),
        }
    }

    #[test]
    fn exactly_twenty_five_rules() {
        assert_eq!(RuleId::ALL.len(), 25);
        let names: std::collections::HashSet<_> = RuleId::ALL.iter().map(|r| r.name()).collect();
        assert_eq!(names.len(), 25);
        for r in RuleId::ALL {
            assert_eq!(r.name().parse::<RuleId>().unwrap(), r);
            assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{}\"", r.name()));
        }
    }

    #[test]
    fn and_splits_the_outer_conjunction() {
        let out = apply_static(&label(&["~p & X~p & (q U p)"]), PrincipalPolicy::Priority).unwrap();
        assert_eq!(out.rule, RuleId::And);
        assert_eq!(children(&out), &[label(&["~p & X~p", "q U p"])]);
    }

    #[test]
    fn contradiction_crosses() {
        let out = apply_static(&label(&["G q", "~G q", "r"]), PrincipalPolicy::Priority).unwrap();
        assert_eq!(out.rule, RuleId::Contradiction);
        assert_eq!(out.outcome, Outcome::Cross);
        assert_eq!(out.principal, Some(f("G q")));
    }

    #[test]
    fn closing_constants() {
        let bot = apply_static(&label(&["false", "p | q"]), PrincipalPolicy::Priority).unwrap();
        assert_eq!((bot.rule, bot.outcome), (RuleId::Bot, Outcome::Cross));
        let nt = apply_static(&label(&["~true"]), PrincipalPolicy::Priority).unwrap();
        assert_eq!((nt.rule, nt.outcome), (RuleId::NotTop, Outcome::Cross));
        let top = apply_static(&label(&["true", "p"]), PrincipalPolicy::Priority).unwrap();
        assert_eq!(top.rule, RuleId::Top);
        assert_eq!(children(&top), &[label(&["p"])]);
        let nb = apply_static(&label(&["~false"]), PrincipalPolicy::Priority).unwrap();
        assert_eq!(nb.rule, RuleId::NotBot);
        assert_eq!(children(&nb), &[Label::empty()]);
        let empty = apply_static(&Label::empty(), PrincipalPolicy::Priority).unwrap();
        assert_eq!((empty.rule, empty.outcome), (RuleId::Empty, Outcome::Tick));
    }

    #[test]
    fn globally_rule() {
        let out = apply_static(&label(&["G p"]), PrincipalPolicy::Priority).unwrap();
        assert_eq!(out.rule, RuleId::Globally);
        assert_eq!(children(&out), &[label(&["p", "X G p"])]);
    }

    #[test]
    fn until_rule_branches() {
        let out = apply_static(&label(&["q U p", "~p"]), PrincipalPolicy::Priority).unwrap();
        assert_eq!(out.rule, RuleId::Until);
        assert_eq!(
            children(&out),
            &[label(&["p", "~p"]), label(&["q", "X(q U p)", "~p"])]
        );
    }

    #[test]
    fn negated_rules() {
        let cases: &[(&str, RuleId, &[&[&str]])] = &[
            ("~~a", RuleId::NotNot, &[&["a"]]),
            ("~(a & b)", RuleId::NotAnd, &[&["~a"], &["~b"]]),
            ("~(a | b)", RuleId::NotOr, &[&["~a", "~b"]]),
            ("~(a -> b)", RuleId::NotImplies, &[&["a", "~b"]]),
            ("~(a <-> b)", RuleId::NotIff, &[&["a", "~b"], &["~a", "b"]]),
            ("~(a U b)", RuleId::NotUntil, &[&["~a", "~b"], &["~b", "X~(a U b)"]]),
            ("~G a", RuleId::NotGlobally, &[&["~a"], &["X~G a"]]),
            ("~F a", RuleId::NotFinally, &[&["~a", "X~F a"]]),
            ("a -> b", RuleId::Implies, &[&["~a"], &["b"]]),
            ("a <-> b", RuleId::Iff, &[&["a", "b"], &["~a", "~b"]]),
            ("a | b", RuleId::Or, &[&["a"], &["b"]]),
            ("F a", RuleId::Finally, &[&["a"], &["X F a"]]),
        ];
        for &(text, rule, expected) in cases {
            let out = decompose(&label(&[text]), f(text)).unwrap();
            assert_eq!(out.rule, rule, "{text}");
            let want: Vec<Label> = expected.iter().map(|c| label(c)).collect();
            assert_eq!(children(&out), want.as_slice(), "{text}");
        }
    }

    #[test]
    fn non_branching_rules_preferred() {
        let out = apply_static(&label(&["r | s", "p & q"]), PrincipalPolicy::Priority).unwrap();
        assert_eq!(out.rule, RuleId::And);
    }

    #[test]
    fn poised_label_has_no_static_rule() {
        assert!(apply_static(&label(&["p", "~q", "X G p"]), PrincipalPolicy::Priority).is_none());
        assert!(apply_static(&label(&["p", "~q", "X G p"]), PrincipalPolicy::Seeded(3)).is_none());
    }

    #[test]
    fn static_moves_lead_with_the_automatic_choice() {
        for text in [["p & q", "r | s"], ["G a", "a U b"], ["~(a <-> b)", "~~c"]] {
            let l = label(&text);
            let moves = static_moves(&l);
            assert_eq!(Some(&moves[0]), apply_static(&l, PrincipalPolicy::Priority).as_ref());
        }
        let moves = static_moves(&label(&["p | q", "r"]));
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].rule, RuleId::Or);
    }

    #[test]
    fn transition_keeps_x_content() {
        assert_eq!(transition(&label(&["p", "X G p"])), label(&["G p"]));
        assert_eq!(transition(&label(&["p", "~q"])), Label::empty());
        assert_eq!(
            transition(&label(&["~p", "X~p", "X(q U p)"])),
            label(&["~p", "q U p"])
        );
        assert_eq!(transition(&label(&["~X a"])), label(&["~a"]));
    }

    fn chain(root: &str, labels: &[&[&str]]) -> Branch {
        let ctx = TableauContext::new(f(root));
        let mut b = Branch::root(&ctx, 0);
        for (i, l) in labels.iter().enumerate() {
            b = b.extend(&ctx, label(l), i as u64 + 1);
        }
        b
    }

    #[test]
    fn loop_on_repeated_globally_label() {
        let b = chain("G p", &[&["p", "X G p"], &["G p"], &["p", "X G p"]]);
        let out = loop_check(&b).unwrap();
        assert_eq!(out.rule, RuleId::Loop);
        assert_eq!(out.evidence, vec![1]);
    }

    #[test]
    fn unfulfilled_eventuality_blocks_loop() {
        let root = "F q & r U q & G p";
        let poised = ["p", "X F q", "X(r U q)", "X G p", "r"];
        let b = chain(root, &[&poised, &["F q", "r U q", "G p"], &poised]);
        assert!(loop_check(&b).is_none());
        // Fulfilment in between lets it through.
        let b = chain(root, &[&poised, &["q", "G p"], &poised]);
        assert_eq!(loop_check(&b).unwrap().evidence, vec![1]);
    }

    #[test]
    fn loop_accepts_superset_ancestor() {
        let b = chain("G p & G q", &[&["p", "q", "X G p", "X G q"], &["G p"], &["p", "X G p"]]);
        assert_eq!(loop_check(&b).unwrap().evidence, vec![1]);
    }

    #[test]
    fn prune_needs_three_occurrences() {
        let root = "G(p & q) & F ~p";
        let poised: &[&str] = &["p", "q", "X G(p & q)", "X F ~p"];
        let mid: &[&str] = &["G(p & q)", "F ~p"];
        let two = chain(root, &[poised, mid, poised]);
        assert!(prune_check(&two).is_none());
        assert!(prune0_check(&two).is_some());
        let three = chain(root, &[poised, mid, poised, mid, poised]);
        let out = prune_check(&three).unwrap();
        assert_eq!(out.rule, RuleId::Prune);
        assert_eq!(out.evidence, vec![1, 3]);
    }

    #[test]
    fn prune_respects_new_progress() {
        let root = "G F p & G F q";
        let poised: &[&str] = &["X G F p", "X G F q", "X F p", "X F q"];
        let with_p: &[&str] = &["p", "G F p", "G F q"];
        let with_q: &[&str] = &["q", "G F p", "G F q"];
        let plain: &[&str] = &["G F p", "G F q"];
        // (u,v] sees only p, (v,w] sees q: new progress, no prune.
        let b = chain(root, &[poised, with_p, poised, with_q, poised]);
        assert!(prune_check(&b).is_none());
        // (u,v] sees p, (v,w] sees nothing new.
        let b = chain(root, &[poised, with_p, poised, plain, poised]);
        assert!(prune_check(&b).is_some());
    }

    #[test]
    fn prune0_needs_an_eventuality_and_no_progress() {
        let b = chain("G p", &[&["p", "X G p"], &["G p"], &["p", "X G p"]]);
        assert!(prune0_check(&b).is_none());
        let poised: &[&str] = &["X G F p", "X F p"];
        let b = chain("G F p", &[poised, &["p", "G F p"], poised]);
        assert!(prune0_check(&b).is_none());
        assert!(loop_check(&b).is_some());
    }

    #[test]
    fn weight_decreases_on_awkward_cases() {
        for text in ["G p <-> G q", "~(G a U F b)", "~(G a | G b)", "~~G p"] {
            let l = label(&[text]);
            let out = apply_static(&l, PrincipalPolicy::Priority).unwrap();
            for child in children(&out) {
                assert!(static_weight(child) < static_weight(&l), "{text} -> {child}");
            }
        }
    }
}
