use std::collections::HashMap;

use thiserror::Error;

use crate::formula::{Formula, Kind};
use crate::model::{LassoModel, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Truth of `f` at the start of the model's fullpath.
///
/// Each subformula gets one truth value per state; states past the prefix
/// repeat with the period, so this is exact. Until and eventually are least
/// fixpoints and always is a greatest fixpoint, each settled by two backward
/// sweeps around the period followed by one over the prefix.
pub fn evaluate(model: &LassoModel, f: Formula) -> Result<bool, EvalError> {
    model.validate()?;
    let mut memo: HashMap<Formula, Vec<bool>> = HashMap::new();
    Ok(truth(model, f, &mut memo)[0])
}

fn truth(model: &LassoModel, f: Formula, memo: &mut HashMap<Formula, Vec<bool>>) -> Vec<bool> {
    if let Some(v) = memo.get(&f) {
        return v.clone();
    }
    let n = model.len();
    let mut sub = |g: Formula| truth(model, g, memo);
    let values: Vec<bool> = match *f.kind() {
        Kind::Atom(ref name) => (0..n).map(|s| model.holds(s, name)).collect(),
        Kind::True => vec![true; n],
        Kind::False => vec![false; n],
        Kind::Not(a) => sub(a).into_iter().map(|x| !x).collect(),
        Kind::And(a, b) => zip(sub(a), sub(b), |x, y| x && y),
        Kind::Or(a, b) => zip(sub(a), sub(b), |x, y| x || y),
        Kind::Implies(a, b) => zip(sub(a), sub(b), |x, y| !x || y),
        Kind::Iff(a, b) => zip(sub(a), sub(b), |x, y| x == y),
        Kind::Next(a) => {
            let inner = sub(a);
            (0..n).map(|s| inner[model.successor(s)]).collect()
        }
        Kind::Until(a, b) => {
            let (hold, goal) = (sub(a), sub(b));
            fixpoint(model, false, |s, next| goal[s] || (hold[s] && next))
        }
        Kind::Finally(a) => {
            let goal = sub(a);
            fixpoint(model, false, |s, next| goal[s] || next)
        }
        Kind::Globally(a) => {
            let inv = sub(a);
            fixpoint(model, true, |s, next| inv[s] && next)
        }
    };
    memo.insert(f, values.clone());
    values
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Solves `v[s] = step(s, v[succ(s)])` starting from `init` everywhere.
///
/// The first sweep around the period fixes the loop-entry state, because
/// any witness for it lies within one period without crossing the back edge;
/// the second sweep then fixes the rest of the period.
fn fixpoint(model: &LassoModel, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let n = model.len();
    let entry = model.prefix_len;
    let mut v = vec![init; n];
    for _ in 0..2 {
        for s in (entry..n).rev() {
            v[s] = step(s, v[model.successor(s)]);
        }
    }
    for s in (0..entry).rev() {
        v[s] = step(s, v[s + 1]);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn eval(m: &LassoModel, text: &str) -> bool {
        evaluate(m, parse_formula(text).unwrap()).unwrap()
    }

    #[test]
    fn constant_p_loop() {
        let m = LassoModel::new([vec!["p"]], 0).unwrap();
        assert!(eval(&m, "G p"));
        assert!(!eval(&m, "F ~p"));
    }

    #[test]
    fn alternating_loop() {
        let m = LassoModel::new([vec!["a"], vec![]], 0).unwrap();
        assert!(eval(&m, "G(a <-> X ~a)"));
        assert!(eval(&m, "a & G F a & G F ~a"));
        assert!(!eval(&m, "F G a"));
    }

    #[test]
    fn until_needs_the_goal_inside_the_loop() {
        // q holds forever but p only in the prefix.
        let m = LassoModel::new([vec!["p"], vec!["q"]], 1).unwrap();
        assert!(eval(&m, "q U p"));
        assert!(!eval(&m, "X(q U p)"));
        assert!(eval(&m, "X G q"));
        // Goal deep in the period, reached from the entry without wrapping.
        let m = LassoModel::new([vec![], vec!["q"], vec!["q"], vec!["p"]], 1).unwrap();
        assert!(eval(&m, "X(q U p)"));
        assert!(eval(&m, "G F p"));
    }

    #[test]
    fn malformed_model_is_an_error() {
        let mut m = LassoModel::new([vec!["p"]], 0).unwrap();
        m.period_len = 0;
        assert!(evaluate(&m, Formula::atom("p")).is_err());
    }
}
