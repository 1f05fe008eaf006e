//! Translation of formulas into tree automata.
//!
//! Atoms become hand-built base automata; `&`, `|` and `~` become product
//! and complement; an existential quantifier compiles its body with one
//! extra bit on top, conjoins the singleton constraint for first-order
//! variables, projects the bit away, closes the result under zero padding
//! and determinizes. With the default policy every step is minimized.

mod base;
mod closure;

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::automaton::{AutomatonError, TreeAutomaton};
use crate::logic::{build_var_table, AtomKind, Formula, FormulaFile, LogicError, Sort, VarTable};

pub use base::base_automaton;
pub use closure::zero_pad_closure;

pub const DEFAULT_MAX_WIDTH: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("formula needs {needed} bits, more than the maximum of {max}")]
    WidthOverflow { needed: usize, max: usize },
    #[error("call to `{0}` must be expanded before compiling")]
    UnexpandedCall(String),
    #[error("emptiness detectors disagree")]
    Inconsistent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    /// Minimize after every construction.
    pub minimize: bool,
    pub max_width: usize,
    /// Conjoin the singleton constraint of every first-order argument into
    /// each atom. The final language is unchanged (every first-order
    /// variable is constrained eventually), but intermediate automata no
    /// longer track relations between arbitrary node sets.
    pub singleton_atoms: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            minimize: true,
            max_width: DEFAULT_MAX_WIDTH,
            singleton_atoms: true,
        }
    }
}

/// One construction step: state count of the raw result and after
/// minimization (equal when minimization is off).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepStat {
    pub step: usize,
    pub op: String,
    pub states_in: usize,
    pub states_out: usize,
    pub elapsed: Duration,
}

impl fmt::Display for StepStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} op={} states_in={} states_out={}",
            self.step, self.op, self.states_in, self.states_out
        )
    }
}

/// Variable table of the formula being compiled plus the stack of
/// currently bound variables, which occupy the highest bit positions.
#[derive(Clone, Debug)]
pub struct CompilationContext {
    table: VarTable,
    bound: Vec<(String, Sort)>,
    options: CompileOptions,
    stats: Vec<StepStat>,
}

impl CompilationContext {
    pub fn new(table: VarTable, options: CompileOptions) -> Self {
        CompilationContext {
            table,
            bound: Vec::new(),
            options,
            stats: Vec::new(),
        }
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn stats(&self) -> &[StepStat] {
        &self.stats
    }

    pub fn take_stats(&mut self) -> Vec<StepStat> {
        std::mem::take(&mut self.stats)
    }

    pub fn width(&self) -> usize {
        self.table.len() + self.bound.len()
    }

    fn position(&self, name: &str) -> Result<usize, CompileError> {
        if let Some(i) = self.bound.iter().rposition(|(v, _)| v == name) {
            return Ok(self.table.len() + i);
        }
        self.table
            .position(name)
            .ok_or_else(|| CompileError::UnboundVariable(name.to_string()))
    }

    fn check_width(&self, needed: usize) -> Result<(), CompileError> {
        if needed > self.options.max_width {
            return Err(CompileError::WidthOverflow {
                needed,
                max: self.options.max_width,
            });
        }
        Ok(())
    }

    /// Records a step and applies the minimization policy.
    fn finish(&mut self, op: impl Into<String>, raw: TreeAutomaton, started: Instant) -> TreeAutomaton {
        let states_in = raw.num_states();
        let out = if self.options.minimize { raw.minimal() } else { raw };
        self.stats.push(StepStat {
            step: self.stats.len() + 1,
            op: op.into(),
            states_in,
            states_out: out.num_states(),
            elapsed: started.elapsed(),
        });
        out
    }

    /// Automaton over the current width accepting the labelings that
    /// satisfy `f`. Free first-order variables are not constrained to be
    /// singletons here; see [`compile_formula`].
    pub fn compile(&mut self, f: &Formula) -> Result<TreeAutomaton, CompileError> {
        self.check_width(self.width())?;
        self.compile_desugared(&f.desugar())
    }

    fn compile_desugared(&mut self, f: &Formula) -> Result<TreeAutomaton, CompileError> {
        let started = Instant::now();
        let width = self.width();
        match f {
            Formula::True => Ok(self.finish("true", TreeAutomaton::universal(width), started)),
            Formula::False => Ok(self.finish("false", TreeAutomaton::empty(width), started)),
            Formula::Atom(kind, args) => {
                let positions = args.iter().map(|a| self.position(a)).collect::<Result<Vec<_>, _>>()?;
                let mut a = base_automaton(*kind, &positions, width)?;
                if self.options.singleton_atoms {
                    let firsts = kind.arg_sorts().iter().zip(&positions).filter(|(s, _)| **s == Sort::First);
                    let mut seen = Vec::new();
                    for (_, &p) in firsts {
                        if !seen.contains(&p) {
                            seen.push(p);
                            a = a.intersect(&base_automaton(AtomKind::Sing, &[p], width)?)?.minimal();
                        }
                    }
                }
                Ok(self.finish(kind.name(), a, started))
            }
            Formula::Call(name, _) => Err(CompileError::UnexpandedCall(name.clone())),
            Formula::Not(g) => {
                let a = self.compile_desugared(g)?;
                let started = Instant::now();
                let c = a.determinize_if_needed().complement()?;
                Ok(self.finish("not", c, started))
            }
            Formula::And(g, h) | Formula::Or(g, h) => {
                let a = self.compile_desugared(g)?;
                let b = self.compile_desugared(h)?;
                let started = Instant::now();
                let (op, c) = if matches!(f, Formula::And(..)) {
                    ("and", a.intersect(&b)?)
                } else {
                    ("or", a.union(&b)?)
                };
                Ok(self.finish(op, c, started))
            }
            Formula::Exists1(v, g) | Formula::Exists2(v, g) => {
                let sort = if matches!(f, Formula::Exists1(..)) { Sort::First } else { Sort::Second };
                self.check_width(width + 1)?;
                self.bound.push((v.clone(), sort));
                let body = self.compile_desugared(g);
                self.bound.pop();
                let mut body = body?;
                if sort == Sort::First {
                    let started = Instant::now();
                    let sing = base_automaton(AtomKind::Sing, &[width], width + 1)?;
                    body = self.finish(format!("sing:{v}"), body.intersect(&sing)?, started);
                }
                let started = Instant::now();
                let projected = body.project(width)?;
                let closed = zero_pad_closure(&projected);
                let kw = if sort == Sort::First { "ex1" } else { "ex2" };
                Ok(self.finish(format!("{kw}:{v}"), closed, started))
            }
            Formula::Implies(..) | Formula::Iff(..) | Formula::Forall1(..) | Formula::Forall2(..) => {
                unreachable!("desugared away")
            }
        }
    }

    /// Conjoins the singleton constraint for every first-order variable of
    /// the table.
    pub fn constrain_singletons(&mut self, a: TreeAutomaton) -> Result<TreeAutomaton, CompileError> {
        let mut a = a;
        let width = self.width();
        let firsts: Vec<(usize, String)> = self
            .table
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.sort == Sort::First)
            .map(|(i, e)| (i, e.name.clone()))
            .collect();
        for (pos, name) in firsts {
            let started = Instant::now();
            let sing = base_automaton(AtomKind::Sing, &[pos], width)?;
            a = self.finish(format!("sing:{name}"), a.intersect(&sing)?, started);
        }
        Ok(a)
    }
}

/// A compiled formula with the variable table that fixes its bit order.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub automaton: TreeAutomaton,
    pub table: VarTable,
    pub stats: Vec<StepStat>,
}

/// Compiles a macro-free formula. Its free variables extend `ambient` in
/// order of first occurrence, and each first-order one is constrained to
/// denote exactly one node.
pub fn compile_formula(
    f: &Formula,
    ambient: Option<&VarTable>,
    options: CompileOptions,
) -> Result<Compiled, CompileError> {
    if let Some(name) = first_call(f) {
        return Err(CompileError::UnexpandedCall(name));
    }
    let table = build_var_table(f, ambient)?;
    let mut ctx = CompilationContext::new(table, options);
    let a = ctx.compile(f)?;
    let automaton = ctx.constrain_singletons(a)?;
    Ok(Compiled {
        automaton,
        table: ctx.table.clone(),
        stats: ctx.take_stats(),
    })
}

/// Expands the macros of a formula file and compiles its main formula.
/// Variables are ordered by first occurrence in the main formula as
/// written, so `LC(P,x,y)` puts `P` first whatever the macro body says.
pub fn compile_file(file: &FormulaFile, options: CompileOptions) -> Result<Compiled, CompileError> {
    let table = build_var_table(&file.main, None)?;
    compile_formula(&file.expanded()?, Some(&table), options)
}

fn first_call(f: &Formula) -> Option<String> {
    let mut found = None;
    f.visit(&mut |g| {
        if let (None, Formula::Call(name, _)) = (&found, g) {
            found = Some(name.clone());
        }
    });
    found
}

/// Nonemptiness, decided both by reachability of a final state and by the
/// shape of the minimal automaton.
pub fn satisfiable(a: &TreeAutomaton) -> Result<bool, CompileError> {
    a.emptiness_cross_check()
        .map(|empty| !empty)
        .ok_or(CompileError::Inconsistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::LabeledTree;
    use crate::logic::{parse, parse_formula};

    fn compile(src: &str) -> Compiled {
        let file = parse_formula(src).unwrap();
        compile_file(&file, CompileOptions::default()).unwrap()
    }

    fn tree(s: &str) -> LabeledTree {
        LabeledTree::parse(s).unwrap()
    }

    const AC_COM_DEFS: &str = "\
        def CCom(x,y) := (all1 z. pdom(z,x) -> pdom(z,y)) & ~rdom(x,y);\n\
        def AcCom(x,y) := CCom(x,y) & ~CCom(y,x) & prec(x,y);\n";

    #[test]
    fn ac_com_compiles_to_six_states() {
        let c = compile(&format!("{AC_COM_DEFS}AcCom(x,y)"));
        assert_eq!(c.table.names().collect::<Vec<_>>(), ["x", "y"]);
        assert_eq!(c.automaton.num_states(), 6);
        assert!(c.automaton.run_membership(&tree("(00 (10 () ()) (00 (01 () ()) ()))")).unwrap());
        assert!(!c.automaton.run_membership(&tree("(00 (10 () ()) (01 () ()))")).unwrap());
        assert_eq!(c.stats.last().unwrap().states_out, 6);
    }

    #[test]
    fn quantified_ac_com_is_a_true_sentence() {
        // Closed under zero padding, a true sentence accepts every tree;
        // the four-node witness lives in the open formula.
        let closed = compile(&format!("{AC_COM_DEFS}ex1 x. ex1 y. AcCom(x,y)"));
        assert_eq!(closed.automaton.width(), 0);
        assert!(satisfiable(&closed.automaton).unwrap());
        assert!(closed.automaton.equivalent(&TreeAutomaton::universal(0)).unwrap());
        let open = compile(&format!("{AC_COM_DEFS}AcCom(x,y)"));
        assert_eq!(open.automaton.witness().unwrap().size(), 4);
    }

    #[test]
    fn contradiction_is_one_state() {
        let c = compile("prec(x,y) & ~prec(x,y)");
        assert_eq!(c.automaton.num_states(), 1);
        assert!(!satisfiable(&c.automaton).unwrap());
        assert!(!satisfiable(&compile("prec(x,x)").automaton).unwrap());
        assert!(satisfiable(&compile("ex1 x. eq1(x,x)").automaton).unwrap());
    }

    #[test]
    fn free_first_order_variables_are_singletons() {
        let c = compile("true & eq1(x,x)");
        assert!(!c.automaton.run_membership(&LabeledTree::Empty).unwrap());
        assert!(c.automaton.run_membership(&tree("(0 (1 () ()) ())")).unwrap());
        assert!(!c.automaton.run_membership(&tree("(1 (1 () ()) ())")).unwrap());
    }

    #[test]
    fn universal_is_negated_existential() {
        let a = compile("all1 x. in(x,X) -> in(x,Y)").automaton;
        let b = compile("~ex1 x. ~(in(x,X) -> in(x,Y))").automaton;
        assert!(a.equivalent(&b).unwrap());
        let sub = compile("sub(X,Y)").automaton;
        assert!(a.equivalent(&sub).unwrap());
    }

    #[test]
    fn width_limit_and_unbound_variables() {
        let f = parse("ex1 a. ex1 b. ex1 c. prec(a,b) & prec(b,c)").unwrap();
        let tight = CompileOptions {
            max_width: 2,
            ..CompileOptions::default()
        };
        assert_eq!(
            compile_formula(&f, None, tight).unwrap_err(),
            CompileError::WidthOverflow { needed: 3, max: 2 }
        );
        let mut ctx = CompilationContext::new(VarTable::new(), CompileOptions::default());
        assert_eq!(
            ctx.compile(&parse("sing(X)").unwrap()).unwrap_err(),
            CompileError::UnboundVariable("X".into())
        );
    }

    #[test]
    fn minimization_policy_off_preserves_language() {
        let f = parse("ex1 z. pdom(x,z) & prec(z,y)").unwrap();
        let on = compile_formula(&f, None, CompileOptions::default()).unwrap();
        let off = compile_formula(
            &f,
            None,
            CompileOptions {
                minimize: false,
                ..CompileOptions::default()
            },
        )
        .unwrap();
        assert!(off.automaton.num_states() >= on.automaton.num_states());
        assert!(off.automaton.equivalent(&on.automaton).unwrap());
        assert!(off.stats.iter().all(|s| s.states_in == s.states_out));
    }
}
