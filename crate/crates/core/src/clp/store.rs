use std::fmt;
use std::sync::Arc;

use crate::automaton::{Address, LabeledTree, TreeAutomaton};
use crate::compiler::{base_automaton, CompilationContext, CompileError, CompileOptions};
use crate::logic::{AtomKind, Formula, Sort, VarTable};

use super::ClpError;

/// A conjunction of constraints, held as one minimal automaton over the
/// variables of `table` (bit `i` is variable `i`). First-order variables
/// are always constrained to be singletons.
#[derive(Clone, Debug)]
pub struct ConstraintStore {
    table: VarTable,
    automaton: Arc<TreeAutomaton>,
}

impl Default for ConstraintStore {
    fn default() -> Self {
        ConstraintStore::new()
    }
}

impl ConstraintStore {
    /// The trivially true store over no variables.
    pub fn new() -> Self {
        ConstraintStore {
            table: VarTable::new(),
            automaton: Arc::new(TreeAutomaton::universal(0)),
        }
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn automaton(&self) -> &TreeAutomaton {
        &self.automaton
    }

    pub fn width(&self) -> usize {
        self.table.len()
    }

    pub fn is_satisfiable(&self) -> bool {
        !self.automaton.is_empty()
    }

    /// Adds any of `names` not yet in the table as don't-care bits at the
    /// end, constraining new first-order variables to singletons.
    pub fn extend<'a>(&self, names: impl IntoIterator<Item = &'a str>, options: &CompileOptions) -> Result<ConstraintStore, ClpError> {
        let mut table = self.table.clone();
        let mut a = (*self.automaton).clone();
        let mut grown = false;
        for name in names {
            if table.contains(name) {
                continue;
            }
            let sort = Sort::of_name(name);
            let pos = table.push(name, sort)?;
            if pos + 1 > options.max_width {
                return Err(CompileError::WidthOverflow {
                    needed: pos + 1,
                    max: options.max_width,
                }
                .into());
            }
            a = a.cylindrify(pos).map_err(CompileError::from)?;
            if sort == Sort::First {
                let sing = base_automaton(AtomKind::Sing, &[pos], pos + 1).map_err(CompileError::from)?;
                a = a.intersect(&sing).map_err(CompileError::from)?.minimal();
            }
            grown = true;
        }
        if !grown {
            return Ok(self.clone());
        }
        Ok(ConstraintStore {
            table,
            automaton: Arc::new(a),
        })
    }

    /// Compiles `f` over the store's variables. Only the variables free in
    /// `f` are compiled; the rest are added back as don't-care bits.
    fn compile_over_table(&self, f: &Formula, options: &CompileOptions) -> Result<TreeAutomaton, ClpError> {
        let free = f.free_vars();
        if let Some(v) = free.iter().find(|v| !self.table.contains(v)) {
            return Err(CompileError::UnboundVariable(v.clone()).into());
        }
        let used: Vec<&str> = self.table.names().filter(|n| free.iter().any(|v| v == n)).collect();
        let sub = VarTable::from_names(&used)?;
        let mut ctx = CompilationContext::new(sub, *options);
        let mut a = ctx.compile(f)?;
        for (pos, name) in self.table.names().enumerate() {
            if !used.contains(&name) {
                a = a.cylindrify(pos).map_err(CompileError::from)?;
            }
        }
        Ok(a)
    }

    /// The store conjoined with `f`, after extending the table with the
    /// free variables of `f`. The result may be unsatisfiable.
    pub fn conjoin(&self, f: &Formula, options: &CompileOptions) -> Result<ConstraintStore, ClpError> {
        let free = f.free_vars();
        let ext = self.extend(free.iter().map(String::as_str), options)?;
        let c = ext.compile_over_table(f, options)?;
        let a = ext.automaton.intersect(&c).map_err(CompileError::from)?.minimal();
        Ok(ConstraintStore {
            table: ext.table,
            automaton: Arc::new(a),
        })
    }

    /// Whether every solution of the store satisfies `f`, decided as
    /// emptiness of the store conjoined with `~f`. All free variables of
    /// `f` must already be in the store.
    pub fn entails(&self, f: &Formula, options: &CompileOptions) -> Result<bool, ClpError> {
        let negated = self.compile_over_table(&Formula::not(f.clone()), options)?;
        let both = self.automaton.intersect(&negated).map_err(CompileError::from)?;
        Ok(both.is_empty())
    }

    /// A size-minimal labeled tree satisfying the store.
    pub fn witness(&self) -> Option<LabeledTree> {
        self.automaton.witness()
    }

    /// The nodes assigned to each variable by `tree`.
    pub fn assignment(&self, tree: &LabeledTree) -> Vec<(String, Vec<Address>)> {
        self.table
            .names()
            .enumerate()
            .map(|(i, n)| (n.to_string(), tree.nodes_with_bit(i)))
            .collect()
    }

    /// Whether this store's solutions, restricted to the variables of
    /// `earlier`, are all solutions of `earlier`. `earlier`'s table must be
    /// a prefix of this one.
    pub fn refines(&self, earlier: &ConstraintStore) -> Result<bool, ClpError> {
        let prefix = self.table.names().take(earlier.width()).eq(earlier.table.names());
        if !prefix {
            return Err(ClpError::TableMismatch);
        }
        let mut wide = (*earlier.automaton).clone();
        for pos in earlier.width()..self.width() {
            wide = wide.cylindrify(pos).map_err(CompileError::from)?;
        }
        Ok(self.automaton.is_subset_of(&wide).map_err(CompileError::from)?)
    }
}

impl fmt::Display for ConstraintStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.table.names().collect();
        write!(f, "[{}] {} states", names.join(", "), self.automaton.num_states())
    }
}

/// Free function form of [`ConstraintStore::entails`] with default options.
pub fn entails(store: &ConstraintStore, f: &Formula) -> Result<bool, ClpError> {
    store.entails(f, &CompileOptions::default())
}
