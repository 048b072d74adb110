use std::fmt;
use std::sync::Arc;

use crate::formula::{Formula, Kind};

/// Set of formulas on a tableau node, sorted by intern key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Label(Arc<[Formula]>);

impl Label {
    pub fn new<I: IntoIterator<Item = Formula>>(formulas: I) -> Label {
        let mut v: Vec<Formula> = formulas.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Label(v.into())
    }

    pub fn empty() -> Label {
        Label(Arc::from(Vec::new()))
    }

    pub fn singleton(f: Formula) -> Label {
        Label(Arc::from(vec![f]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, f: Formula) -> bool {
        self.0.binary_search(&f).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Formula> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.0
    }

    /// `self ⊇ other`, by a merge walk over both sorted slices.
    pub fn is_superset_of(&self, other: &Label) -> bool {
        if other.len() > self.len() {
            return false;
        }
        let mut mine = self.0.iter();
        'outer: for f in other.0.iter() {
            for g in mine.by_ref() {
                match g.cmp(f) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// Removes `principal` and unions in `added`.
    pub fn consume(&self, principal: Formula, added: &[Formula]) -> Label {
        Label::new(
            self.iter()
                .filter(|&f| f != principal)
                .chain(added.iter().copied()),
        )
    }

    /// A member whose negation is also a member, if any.
    pub fn contradiction(&self) -> Option<Formula> {
        self.iter()
            .find(|f| matches!(*f.kind(), Kind::Not(inner) if self.contains(inner)))
    }

    /// Nonempty, contradiction-free and entirely elementary.
    pub fn is_poised(&self) -> bool {
        !self.is_empty() && self.iter().all(|f| f.is_elementary()) && self.contradiction().is_none()
    }

    /// Members of the form `X(a U b)` or `X F b`.
    pub fn x_eventualities(&self) -> impl Iterator<Item = Formula> + '_ {
        self.iter().filter(|f| f.eventuality_target().is_some())
    }

    /// Display strings of the members, in label order.
    pub fn formatted(&self) -> Vec<String> {
        self.iter().map(|f| f.to_string()).collect()
    }
}

impl FromIterator<Formula> for Label {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Label::new(iter)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, g) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
