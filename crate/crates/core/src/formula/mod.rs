//! LTL formulas over the full connective set (`~ & | -> <-> X U F G`, plus
//! `true`/`false`), hash-consed into a process-wide interner.
//!
//! Abbreviations are kept as first-class constructors: `F p` is never
//! rewritten to `true U p`, and the tableau has dedicated rules for each.
//!
//! A [`Formula`] is a copyable handle. Two handles are equal exactly when the
//! syntax trees are structurally equal, so equality, hashing and ordering are
//! all done on the intern key.

mod closure;
mod display;
mod parse;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, OnceLock};

use parking_lot::RwLock;

pub use closure::{closure_set, ClosureSet};
pub use display::{format_formula, Notation};
pub use parse::{parse_formula, ParseError};

/// Top-level constructor of a formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Atom(Arc<str>),
    True,
    False,
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Implies(Formula, Formula),
    Iff(Formula, Formula),
    Next(Formula),
    Until(Formula, Formula),
    Finally(Formula),
    Globally(Formula),
}

struct Node {
    id: u32,
    kind: Kind,
    length: usize,
    // The rules build these constantly; caching skips the interner lock.
    negation: OnceLock<Formula>,
    next: OnceLock<Formula>,
}

/// Interned LTL formula.
#[derive(Clone, Copy)]
pub struct Formula(&'static Node);

static INTERNER: LazyLock<RwLock<HashMap<Kind, Formula>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn intern(kind: Kind) -> Formula {
    if let Some(f) = INTERNER.read().get(&kind) {
        return *f;
    }
    let mut table = INTERNER.write();
    if let Some(f) = table.get(&kind) {
        return *f;
    }
    let length = 1 + kind.children().map(|c| c.length()).sum::<usize>();
    let id = u32::try_from(table.len()).expect("formula interner overflow");
    // Interned nodes live for the rest of the process.
    let node: &'static Node = Box::leak(Box::new(Node {
        id,
        kind: kind.clone(),
        length,
        negation: OnceLock::new(),
        next: OnceLock::new(),
    }));
    let f = Formula(node);
    table.insert(kind, f);
    f
}

impl Kind {
    /// Immediate children, left to right.
    pub fn children(&self) -> impl Iterator<Item = Formula> {
        let (a, b) = match *self {
            Kind::Atom(_) | Kind::True | Kind::False => (None, None),
            Kind::Not(a) | Kind::Next(a) | Kind::Finally(a) | Kind::Globally(a) => (Some(a), None),
            Kind::And(a, b)
            | Kind::Or(a, b)
            | Kind::Implies(a, b)
            | Kind::Iff(a, b)
            | Kind::Until(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        intern(Kind::Atom(Arc::from(name)))
    }

    pub fn top() -> Formula {
        intern(Kind::True)
    }

    pub fn bottom() -> Formula {
        intern(Kind::False)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        *self.0.negation.get_or_init(|| intern(Kind::Not(self)))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        intern(Kind::And(self, rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        intern(Kind::Or(self, rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        intern(Kind::Implies(self, rhs))
    }

    pub fn iff(self, rhs: Formula) -> Formula {
        intern(Kind::Iff(self, rhs))
    }

    pub fn next(self) -> Formula {
        *self.0.next.get_or_init(|| intern(Kind::Next(self)))
    }

    pub fn until(self, rhs: Formula) -> Formula {
        intern(Kind::Until(self, rhs))
    }

    pub fn finally(self) -> Formula {
        intern(Kind::Finally(self))
    }

    pub fn globally(self) -> Formula {
        intern(Kind::Globally(self))
    }

    /// Left-associated conjunction of `parts`; `None` when empty.
    pub fn conjoin<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn kind(&self) -> &'static Kind {
        &self.0.kind
    }

    /// Intern key. Stable for the lifetime of the process.
    pub fn id(&self) -> u32 {
        self.0.id
    }

    /// Number of nodes in the syntax tree.
    pub fn length(&self) -> usize {
        self.0.length
    }

    pub fn atom_name(&self) -> Option<&'static str> {
        match self.kind() {
            Kind::Atom(name) => Some(name),
            _ => None,
        }
    }

    /// The formula under a single leading negation, if any.
    pub fn negated(&self) -> Option<Formula> {
        match *self.kind() {
            Kind::Not(a) => Some(a),
            _ => None,
        }
    }

    /// Atoms, negated atoms, `X a` and `~X a`. Static rules never touch these.
    pub fn is_elementary(&self) -> bool {
        match *self.kind() {
            Kind::Atom(_) | Kind::Next(_) => true,
            Kind::Not(inner) => matches!(inner.kind(), Kind::Atom(_) | Kind::Next(_)),
            _ => false,
        }
    }

    /// For an X-eventuality returns the formula that must eventually hold:
    /// `b` for `X(a U b)` and `X F b`, and `~b` for `X~G b`.
    pub fn eventuality_target(&self) -> Option<Formula> {
        let Kind::Next(inner) = *self.kind() else {
            return None;
        };
        match *inner.kind() {
            Kind::Until(_, b) | Kind::Finally(b) => Some(b),
            Kind::Not(g) => match *g.kind() {
                Kind::Globally(b) => Some(b.not()),
                _ => None,
            },
            _ => None,
        }
    }

    /// All distinct subformulas, including `self`, children before parents.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        fn walk(f: Formula, seen: &mut std::collections::HashSet<Formula>, out: &mut Vec<Formula>) {
            if !seen.insert(f) {
                return;
            }
            for c in f.kind().children() {
                walk(c, seen, out);
            }
            out.push(f);
        }
        walk(*self, &mut seen, &mut out);
        out
    }

    /// Atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> Vec<&'static str> {
        let mut names: Vec<&'static str> =
            self.subformulas().iter().filter_map(|f| f.atom_name()).collect();
        names.sort_unstable();
        names.dedup();
        names
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}:{}", self.id(), self)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_formula(*self, Notation::Ascii))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
