//! Depth-first resolution with constraint stores.
//!
//! A branch holds the goals still to prove and the store built so far.
//! Resolving the first goal against a clause renames the clause apart,
//! conjoins its constraint to the store and replaces the goal by the
//! clause body. Branches whose store becomes empty are abandoned.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{Address, LabeledTree};
use crate::compiler::CompileOptions;
use crate::logic::{substitute, Formula, Sort};

use super::program::{Goal, Program, Query};
use super::store::ConstraintStore;
use super::ClpError;

pub const DEFAULT_DEPTH: usize = 64;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Maximum number of clause applications on one branch.
    pub depth: usize,
    /// Re-run with bounds 1, 2, 4, ... up to `depth`, so shallow solutions
    /// come first even under left-recursive clauses.
    pub iterative: bool,
    pub trace: bool,
    pub compile: CompileOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            depth: DEFAULT_DEPTH,
            iterative: false,
            trace: false,
            compile: CompileOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub store: ConstraintStore,
    pub witness: LabeledTree,
    /// Nodes of the witness assigned to each store variable.
    pub assignment: Vec<(String, Vec<Address>)>,
    /// Renamed constraints in the order they were added.
    pub applied: Vec<Formula>,
    /// The store after the query constraint and after each clause.
    pub history: Vec<ConstraintStore>,
    /// Number of clause applications.
    pub depth: usize,
}

#[derive(Clone, Debug)]
struct Branch {
    goals: Vec<Goal>,
    store: ConstraintStore,
    applied: Vec<Formula>,
    history: Vec<ConstraintStore>,
    depth: usize,
    fresh: usize,
}

struct Frame {
    branch: Branch,
    next_clause: usize,
}

/// Iterator over the solutions of a query, in depth-first clause order.
pub struct Solver<'p> {
    program: &'p Program,
    options: SolveOptions,
    root: Option<Branch>,
    stack: Vec<Frame>,
    bound: usize,
    previous_bound: Option<usize>,
    round_cutoffs: usize,
    cutoffs: usize,
    trace: Vec<String>,
    failed: bool,
}

/// Checks the query statically and prepares the solver. The query
/// constraint is conjoined immediately; an unsatisfiable one yields a
/// solver with no solutions.
pub fn solve<'p>(program: &'p Program, query: &Query, options: SolveOptions) -> Result<Solver<'p>, ClpError> {
    check_goals(program, &query.goals)?;
    let start = ConstraintStore::new();
    let mut history = vec![start.clone()];
    let mut applied = Vec::new();
    let store = match &query.constraint {
        Some(c) => {
            let s = start.conjoin(c, &options.compile)?;
            history.push(s.clone());
            applied.push(c.clone());
            s
        }
        None => start,
    };
    let mut trace = Vec::new();
    if options.trace {
        trace.push(format!("query store {store}"));
    }
    let root = store.is_satisfiable().then(|| Branch {
        goals: query.goals.clone(),
        store,
        applied,
        history,
        depth: 0,
        fresh: 0,
    });
    if root.is_none() && options.trace {
        trace.push("query constraint is unsatisfiable".to_string());
    }
    let bound = if options.iterative { 1.min(options.depth) } else { options.depth };
    let stack = root
        .iter()
        .map(|b| Frame {
            branch: b.clone(),
            next_clause: 0,
        })
        .collect();
    Ok(Solver {
        program,
        options,
        root,
        stack,
        bound,
        previous_bound: None,
        round_cutoffs: 0,
        cutoffs: 0,
        trace,
        failed: false,
    })
}

/// Every goal reachable from `goals` must name a defined predicate, and
/// its arguments must have the sorts of the clause parameters.
fn check_goals(program: &Program, goals: &[Goal]) -> Result<(), ClpError> {
    let mut seen = BTreeSet::new();
    let mut todo: Vec<&Goal> = goals.iter().collect();
    while let Some(g) = todo.pop() {
        if !seen.insert((g.pred.as_str(), g.args.len())) {
            continue;
        }
        if !program.defines(&g.pred, g.args.len()) {
            return Err(ClpError::UnknownPredicate(format!("{}/{}", g.pred, g.args.len())));
        }
        for (_, c) in program.clauses_for(&g.pred, g.args.len()) {
            todo.extend(&c.body);
        }
    }
    let all = goals.iter().chain(program.clauses.iter().flat_map(|c| &c.body));
    for g in all {
        for (_, c) in program.clauses_for(&g.pred, g.args.len()) {
            for (p, a) in c.params.iter().zip(&g.args) {
                if Sort::of_name(p) != Sort::of_name(a) {
                    return Err(ClpError::CallSort {
                        goal: g.to_string(),
                        param: p.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

impl Solver<'_> {
    /// Trace lines recorded so far (empty unless tracing is on).
    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    /// Branches abandoned at the depth bound, over all rounds.
    pub fn cutoffs(&self) -> usize {
        self.cutoffs
    }

    fn log(&mut self, depth: usize, line: impl FnOnce() -> String) {
        if self.options.trace {
            let indent = "  ".repeat(depth);
            self.trace.push(format!("{indent}{}", line()));
        }
    }

    /// Resolves the first goal of `b` with clause `ci`; `None` when the
    /// resulting store is unsatisfiable.
    fn apply(&self, b: &Branch, ci: usize) -> Result<Option<Branch>, ClpError> {
        let clause = &self.program.clauses[ci];
        let goal = &b.goals[0];
        let suffix = b.fresh + 1;
        let mut map: HashMap<String, String> = clause.params.iter().cloned().zip(goal.args.iter().cloned()).collect();
        for v in clause.locals() {
            // Uppercase locals are global: every clause mentioning them
            // refers to the same set.
            if Sort::of_name(&v) == Sort::First {
                map.insert(v.clone(), format!("{v}#{suffix}"));
            }
        }
        let rename = |g: &Goal| Goal {
            pred: g.pred.clone(),
            args: g.args.iter().map(|a| map.get(a).unwrap_or(a).clone()).collect(),
        };
        let mut goals: Vec<Goal> = clause.body.iter().map(rename).collect();
        goals.extend(b.goals[1..].iter().cloned());
        let mut next = Branch {
            goals,
            store: b.store.clone(),
            applied: b.applied.clone(),
            history: b.history.clone(),
            depth: b.depth + 1,
            fresh: suffix,
        };
        if let Some(c) = &clause.constraint {
            let renamed = substitute(c, &map);
            next.store = b.store.conjoin(&renamed, &self.options.compile)?;
            next.applied.push(renamed);
        }
        next.history.push(next.store.clone());
        Ok(next.store.is_satisfiable().then_some(next))
    }

    fn solution(&self, b: Branch) -> Solution {
        let witness = b.store.witness().expect("stores on the stack are satisfiable");
        let assignment = b.store.assignment(&witness);
        Solution {
            store: b.store,
            witness,
            assignment,
            applied: b.applied,
            history: b.history,
            depth: b.depth,
        }
    }

    fn next_round(&mut self) -> bool {
        if !self.options.iterative || self.round_cutoffs == 0 || self.bound >= self.options.depth {
            return false;
        }
        let Some(root) = self.root.clone() else {
            return false;
        };
        self.previous_bound = Some(self.bound);
        self.bound = (self.bound * 2).min(self.options.depth);
        self.round_cutoffs = 0;
        let bound = self.bound;
        self.log(0, || format!("deepening to bound {bound}"));
        self.stack.push(Frame {
            branch: root,
            next_clause: 0,
        });
        true
    }
}

impl Iterator for Solver<'_> {
    type Item = Result<Solution, ClpError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            let Some(top) = self.stack.last_mut() else {
                if self.next_round() {
                    continue;
                }
                return None;
            };
            let depth = top.branch.depth;
            if top.branch.goals.is_empty() {
                let b = self.stack.pop().unwrap().branch;
                if self.previous_bound.is_some_and(|p| depth <= p) {
                    continue;
                }
                self.log(depth, || format!("solution {}", b.store));
                return Some(Ok(self.solution(b)));
            }
            if depth >= self.bound {
                self.stack.pop();
                self.round_cutoffs += 1;
                self.cutoffs += 1;
                self.log(depth, || "depth bound reached".to_string());
                continue;
            }
            let goal = &top.branch.goals[0];
            let candidates: Vec<usize> = self
                .program
                .clauses_for(&goal.pred, goal.args.len())
                .map(|(i, _)| i)
                .collect();
            let Some(&ci) = candidates.get(top.next_clause) else {
                self.stack.pop();
                continue;
            };
            top.next_clause += 1;
            let goal_text = goal.to_string();
            let branch = top.branch.clone();
            self.log(depth, || format!("{goal_text} with clause {}", ci + 1));
            match self.apply(&branch, ci) {
                Ok(Some(child)) => {
                    let store = child.store.to_string();
                    self.log(depth, || format!("  store {store}"));
                    self.stack.push(Frame {
                        branch: child,
                        next_clause: 0,
                    });
                }
                Ok(None) => self.log(depth, || "  unsatisfiable, backtracking".to_string()),
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            }
        }
    }
}
