pub mod automaton;
pub mod clp;
pub mod compiler;
pub mod logic;
mod par;

pub use automaton::{AutomatonError, LabeledTree, TreeAutomaton};
pub use par::is_parallel;
