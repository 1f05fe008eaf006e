//! Syntax of the monadic second-order tree logic.
//!
//! Lowercase variables are first-order (nodes), uppercase ones second-order
//! (finite node sets). Relations are dominance, precedence, membership and
//! set comparisons; named macros are expanded by substitution.

mod ast;
pub(crate) mod lexer;
mod macros;
pub(crate) mod parser;
mod printer;
mod vars;

use thiserror::Error;

pub use ast::{AtomKind, Formula, FormulaFile, MacroDef, Quantifier, Sort};
pub use macros::{expand_macros, substitute};
pub use parser::{parse, parse_formula};
pub use vars::{build_var_table, VarEntry, VarTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: sort error: {msg}")]
    Sort { line: usize, col: usize, msg: String },
    #[error("unknown macro `{0}`")]
    UnboundMacro(String),
    #[error("macro `{0}` is defined in terms of itself")]
    Recursion(String),
    #[error("macro `{name}` expects {expected} arguments, found {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("macro `{name}`: argument `{arg}` does not have the sort of parameter `{param}`")]
    CallSort { name: String, param: String, arg: String },
    #[error("macro `{0}` is defined twice")]
    DuplicateMacro(String),
    #[error("macro `{name}` uses `{var}`, which is not a parameter")]
    MacroFreeVar { name: String, var: String },
    #[error("variable `{0}` is used with both sorts")]
    SortClash(String),
}

impl FormulaFile {
    /// The main formula with all macros expanded.
    pub fn expanded(&self) -> Result<Formula, LogicError> {
        expand_macros(&self.main, &self.defs)
    }
}
