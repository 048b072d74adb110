//! Satisfiability for propositional linear temporal logic with a one-pass,
//! tree-shaped tableau.
//!
//! ```
//! use ltl_tableau::{parse_formula, solve, SearchOptions};
//!
//! let f = parse_formula("G p & F ~q").unwrap();
//! let verdict = solve(f, &SearchOptions::default()).unwrap();
//! assert!(verdict.is_sat());
//! assert!(ltl_tableau::oracle::evaluate(verdict.model().unwrap(), f).unwrap());
//! ```
//!
//! The pieces:
//!
//! * [`formula`]: interned syntax, parser, printer and closure sets.
//! * [`rules`]: the static rules plus LOOP, PRUNE, PRUNE0 and TRANSITION.
//! * [`search`]: sequential and work-stealing parallel search with lasso
//!   model extraction.
//! * [`oracle`]: an exact lasso evaluator and a graph-elimination decision
//!   procedure used for cross-checking.
//! * [`bench`]: formula series and CSV benchmarking.
//! * [`explorer`]: step-by-step manual tableau sessions, also served over
//!   HTTP.

pub mod bench;
pub mod branch;
pub mod cli;
pub mod explorer;
pub mod formula;
pub mod label;
pub mod model;
pub mod oracle;
pub mod rules;
pub mod search;
pub mod trace;

pub use branch::{Branch, TableauContext};
pub use formula::{closure_set, format_formula, parse_formula, ClosureSet, Formula, Kind, ParseError};
pub use label::Label;
pub use model::{extract_model, LassoModel};
pub use rules::{PrincipalPolicy, RuleId, RuleOutcome};
pub use search::{run_parallel, solve, SearchError, SearchOptions, SearchResult, SearchStats, Verdict};
pub use trace::{Trace, TraceEvent};
