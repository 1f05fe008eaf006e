//! Constraint logic programming over tree constraints.
//!
//! Clauses carry formula constraints; a derivation accumulates them in a
//! [`ConstraintStore`], whose automaton is checked for emptiness after
//! every step. Lowercase clause variables that are not parameters are
//! renamed apart per application; uppercase ones are shared by the whole
//! derivation.

mod program;
mod solve;
mod store;

use thiserror::Error;

use crate::compiler::CompileError;
use crate::logic::LogicError;

pub use program::{load_program, parse_query, Clause, Goal, Program, Query};
pub use solve::{solve, SolveOptions, Solution, Solver, DEFAULT_DEPTH};
pub use store::{entails, ConstraintStore};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClpError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("in `{goal}`: argument sort differs from parameter `{param}`")]
    CallSort { goal: String, param: String },
    #[error("store variable tables do not match")]
    TableMismatch,
}
