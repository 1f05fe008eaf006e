//! Program and query syntax.
//!
//! ```text
//! def Tree(P) := ...;
//! lexicon(x) <- { in(x,Sees) & in(x,V) }.
//! parse(W,P) <- { Tree(P) } & yield(W,P) & xbar(P).
//! ?- { prec(x,y) } & lexicon(x).
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::logic::parser::{check_calls, check_defs, Parser};
use crate::logic::{expand_macros, Formula, LogicError, MacroDef, Sort};

use super::ClpError;
use crate::logic::lexer::Tok;

/// A call `name(args)`; arguments are variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Goal {
    pub pred: String,
    pub args: Vec<String>,
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pred, self.args.join(", "))
    }
}

/// `head(params) <- { constraint } & body.`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: String,
    pub params: Vec<String>,
    /// Macro-expanded constraint; `None` when the clause has none.
    pub constraint: Option<Formula>,
    pub body: Vec<Goal>,
}

impl Clause {
    /// Variables of the clause that are not parameters, in order of first
    /// occurrence.
    pub fn locals(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut note = |v: &String| {
            if !self.params.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        if let Some(c) = &self.constraint {
            c.free_vars().iter().for_each(&mut note);
        }
        self.body.iter().flat_map(|g| &g.args).for_each(&mut note);
        out
    }

    fn second_order_vars(&self) -> BTreeSet<String> {
        let mut vars: BTreeSet<String> = self.params.iter().cloned().collect();
        if let Some(c) = &self.constraint {
            vars.extend(c.all_vars());
        }
        vars.extend(self.body.iter().flat_map(|g| g.args.iter().cloned()));
        vars.retain(|v| Sort::of_name(v) == Sort::Second);
        vars
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.head, self.params.join(", "))?;
        let mut parts = Vec::new();
        if let Some(c) = &self.constraint {
            parts.push(format!("{{ {c} }}"));
        }
        parts.extend(self.body.iter().map(Goal::to_string));
        if !parts.is_empty() {
            write!(f, " <- {}", parts.join(" & "))?;
        }
        f.write_str(".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub defs: Vec<MacroDef>,
    pub clauses: Vec<Clause>,
    /// Recursive predicates whose clauses use second-order variables; the
    /// program is accepted, but termination is no longer guaranteed.
    pub warnings: Vec<String>,
}

impl Program {
    /// Clauses for `name/arity` with their indices, in program order.
    pub fn clauses_for<'a>(&'a self, name: &'a str, arity: usize) -> impl Iterator<Item = (usize, &'a Clause)> + 'a {
        self.clauses
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.head == name && c.params.len() == arity)
    }

    pub fn defines(&self, name: &str, arity: usize) -> bool {
        self.clauses_for(name, arity).next().is_some()
    }
}

/// `?- { constraint } & goals.`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub constraint: Option<Formula>,
    pub goals: Vec<Goal>,
}

pub fn load_program(text: &str) -> Result<Program, ClpError> {
    let mut p = Parser::new(text)?;
    let mut defs = Vec::new();
    let mut raw = Vec::new();
    while !p.at_eof() {
        if p.at_def() {
            defs.push(p.macro_def()?);
            continue;
        }
        let (line, col) = p.location();
        let head = predicate_name(&mut p)?;
        let params = p.ident_list()?;
        for (i, v) in params.iter().enumerate() {
            if params[..i].contains(v) {
                return Err(LogicError::Syntax {
                    line,
                    col,
                    msg: format!("parameter `{v}` of `{head}` is repeated"),
                }
                .into());
            }
        }
        let (constraint, body) = if p.eat(&Tok::LeftArrow) {
            body_items(&mut p)?
        } else {
            (None, Vec::new())
        };
        p.expect(&Tok::Dot)?;
        raw.push((head, params, constraint, body));
    }
    check_defs(&defs)?;
    let mut clauses = Vec::new();
    for (head, params, constraint, body) in raw {
        let constraint = match constraint {
            Some(c) => {
                check_calls(&c, &defs)?;
                Some(expand_macros(&c, &defs)?)
            }
            None => None,
        };
        clauses.push(Clause {
            head,
            params,
            constraint,
            body,
        });
    }
    let warnings = recursion_warnings(&clauses);
    Ok(Program {
        defs,
        clauses,
        warnings,
    })
}

/// Parses a query; the leading `?-` and trailing `.` are optional. Macro
/// calls in the constraint are expanded with `defs`.
pub fn parse_query(text: &str, defs: &[MacroDef]) -> Result<Query, ClpError> {
    let mut p = Parser::new(text)?;
    p.eat(&Tok::Query);
    let (constraint, goals) = body_items(&mut p)?;
    p.eat(&Tok::Dot);
    if !p.at_eof() {
        return Err(p.error(format!("unexpected {}", p.peek().describe())).into());
    }
    let constraint = match constraint {
        Some(c) => Some(expand_macros(&c, defs)?),
        None => None,
    };
    Ok(Query { constraint, goals })
}

fn predicate_name(p: &mut Parser) -> Result<String, ClpError> {
    let (line, col) = p.location();
    let name = p.ident()?;
    if Sort::of_name(&name) != Sort::First {
        return Err(LogicError::Syntax {
            line,
            col,
            msg: format!("predicate names are lowercase, found `{name}`"),
        }
        .into());
    }
    Ok(name)
}

/// `{ f } & g(x) & { h } & ...`; several constraints are conjoined.
fn body_items(p: &mut Parser) -> Result<(Option<Formula>, Vec<Goal>), ClpError> {
    let mut constraints = Vec::new();
    let mut goals = Vec::new();
    loop {
        if p.eat(&Tok::LBrace) {
            constraints.push(p.formula()?);
            p.expect(&Tok::RBrace)?;
        } else {
            let pred = predicate_name(p)?;
            let args = p.ident_list()?;
            goals.push(Goal { pred, args });
        }
        if !p.eat(&Tok::Amp) {
            break;
        }
    }
    let constraint = (!constraints.is_empty()).then(|| Formula::conjoin(constraints));
    Ok((constraint, goals))
}

/// Flags recursive predicates whose clauses mention second-order variables.
fn recursion_warnings(clauses: &[Clause]) -> Vec<String> {
    type Pred = (String, usize);
    let mut calls: BTreeMap<Pred, BTreeSet<Pred>> = BTreeMap::new();
    for c in clauses {
        let entry = calls.entry((c.head.clone(), c.params.len())).or_default();
        entry.extend(c.body.iter().map(|g| (g.pred.clone(), g.args.len())));
    }
    let reaches_itself = |start: &Pred| {
        let mut seen = BTreeSet::new();
        let mut todo: Vec<&Pred> = calls.get(start).into_iter().flatten().collect();
        while let Some(p) = todo.pop() {
            if p == start {
                return true;
            }
            if seen.insert(p) {
                todo.extend(calls.get(p).into_iter().flatten());
            }
        }
        false
    };
    let mut out = Vec::new();
    for (i, c) in clauses.iter().enumerate() {
        let pred = (c.head.clone(), c.params.len());
        if !reaches_itself(&pred) {
            continue;
        }
        let vars = c.second_order_vars();
        if !vars.is_empty() {
            let list: Vec<&str> = vars.iter().map(String::as_str).collect();
            out.push(format!(
                "clause {} of recursive predicate {}/{} uses second-order variables {}; resolution may not terminate",
                i + 1,
                c.head,
                c.params.len(),
                list.join(", ")
            ));
        }
    }
    out
}
