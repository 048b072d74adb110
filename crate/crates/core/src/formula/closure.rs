use std::collections::BTreeSet;

use super::{Formula, Kind};

/// Every formula that can appear in a tableau label for a given root.
///
/// Members are `ψ` and `~ψ` for every subformula `ψ`, plus the X-wrapped
/// forms the temporal rules introduce: `X(a U b)`, `~X(a U b)`, `X~(a U b)`
/// for each until, `X F a`, `X~F a` for each eventually and `X G a`, `X~G a`
/// for each always.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSet {
    members: BTreeSet<Formula>,
}

impl ClosureSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: Formula) -> bool {
        self.members.contains(&f)
    }

    /// Members in intern-key order.
    pub fn iter(&self) -> impl Iterator<Item = Formula> + '_ {
        self.members.iter().copied()
    }

    /// Members of the form `X(a U b)` or `X F b`.
    pub fn x_eventualities(&self) -> impl Iterator<Item = Formula> + '_ {
        self.iter().filter(|f| f.eventuality_target().is_some())
    }

    /// Distinct targets `b` of the X-eventualities, in intern-key order.
    pub fn eventuality_targets(&self) -> Vec<Formula> {
        let targets: BTreeSet<Formula> = self
            .x_eventualities()
            .filter_map(|f| f.eventuality_target())
            .collect();
        targets.into_iter().collect()
    }
}

pub fn closure_set(root: Formula) -> ClosureSet {
    let mut members = BTreeSet::new();
    for sub in root.subformulas() {
        members.insert(sub);
        members.insert(sub.not());
        match *sub.kind() {
            Kind::Until(..) => {
                members.insert(sub.next());
                members.insert(sub.next().not());
                members.insert(sub.not().next());
            }
            Kind::Finally(_) | Kind::Globally(_) => {
                members.insert(sub.next());
                members.insert(sub.not().next());
            }
            _ => {}
        }
    }
    ClosureSet { members }
}
