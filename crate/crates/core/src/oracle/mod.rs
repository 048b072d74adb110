//! Ground truth independent of the tableau: exact evaluation of formulas on
//! lasso models, a graph-elimination decision procedure over maximal
//! consistent sets, and a seeded random formula generator.

mod evaluate;
mod graph;
mod random;

pub use evaluate::{evaluate, EvalError};
pub use graph::{decide_graph, decide_graph_with_limit, GraphError, GraphTableau, DEFAULT_ELEMENTARY_LIMIT};
pub use random::{random_formula, random_formula_from};
