//! Recursive-descent parser for formulas and formula files.
//!
//! Binding strength, loosest first: `<->` (left-associative), `->`
//! (right-associative), `|`, `&`, `~`. A quantifier body extends as far to
//! the right as possible.

use std::collections::HashMap;

use super::ast::{AtomKind, Formula, FormulaFile, MacroDef, Quantifier, Sort};
use super::lexer::{tokenize, Spanned, Tok};
use super::LogicError;

const KEYWORDS: [&str; 7] = ["ex1", "ex2", "all1", "all2", "def", "true", "false"];

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser, LogicError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn location(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> LogicError {
        let (line, col) = self.location();
        LogicError::Syntax { line, col, msg: msg.into() }
    }

    fn sort_error(&self, line: usize, col: usize, msg: String) -> LogicError {
        LogicError::Sort { line, col, msg }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), LogicError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    /// A non-keyword identifier.
    pub(crate) fn ident(&mut self) -> Result<String, LogicError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.advance();
                Ok(s)
            }
            other => Err(self.error(format!("expected an identifier, found {}", other.describe()))),
        }
    }

    /// `(a, b, ...)`, possibly empty.
    pub(crate) fn ident_list(&mut self) -> Result<Vec<String>, LogicError> {
        self.expect(&Tok::LParen)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(out);
        }
        loop {
            out.push(self.ident()?);
            if self.eat(&Tok::RParen) {
                return Ok(out);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::DoubleArrow) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if let Tok::Ident(word) = self.peek() {
            let binder = match word.as_str() {
                "ex1" => Some((Quantifier::Exists, Sort::First)),
                "ex2" => Some((Quantifier::Exists, Sort::Second)),
                "all1" => Some((Quantifier::Forall, Sort::First)),
                "all2" => Some((Quantifier::Forall, Sort::Second)),
                _ => None,
            };
            if let Some((q, sort)) = binder {
                let keyword = word.clone();
                self.advance();
                return self.quantified(&keyword, q, sort);
            }
        }
        self.primary()
    }

    fn quantified(&mut self, keyword: &str, q: Quantifier, sort: Sort) -> Result<Formula, LogicError> {
        let mut vars = Vec::new();
        loop {
            let (line, col) = self.location();
            let v = self.ident()?;
            if Sort::of_name(&v) != sort {
                return Err(self.sort_error(line, col, format!("`{keyword}` binds {sort} variables, but `{v}` is not")));
            }
            vars.push(v);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::Dot)?;
        let body = self.formula()?;
        Ok(vars.iter().rev().fold(body, |acc, v| Formula::quantify(q, v, acc)))
    }

    fn primary(&mut self) -> Result<Formula, LogicError> {
        let (line, col) = self.location();
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(w) if w == "true" => {
                self.advance();
                Ok(Formula::True)
            }
            Tok::Ident(w) if w == "false" => {
                self.advance();
                Ok(Formula::False)
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.advance();
                if *self.peek() != Tok::LParen {
                    return Err(self.sort_error(
                        line,
                        col,
                        format!("`{name}` is a {} variable, not a formula", Sort::of_name(&name)),
                    ));
                }
                let args = self.ident_list()?;
                match AtomKind::from_name(&name) {
                    Some(kind) => {
                        let sorts = kind.arg_sorts();
                        if sorts.len() != args.len() {
                            return Err(LogicError::Syntax {
                                line,
                                col,
                                msg: format!("`{name}` takes {} arguments, found {}", sorts.len(), args.len()),
                            });
                        }
                        for (i, (a, &s)) in args.iter().zip(sorts).enumerate() {
                            if Sort::of_name(a) != s {
                                return Err(self.sort_error(
                                    line,
                                    col,
                                    format!("argument {} of `{name}` must be {s}, but `{a}` is not", i + 1),
                                ));
                            }
                        }
                        Ok(Formula::Atom(kind, args))
                    }
                    None => Ok(Formula::Call(name, args)),
                }
            }
            other => Err(self.error(format!("expected a formula, found {}", other.describe()))),
        }
    }

    /// `def Name(params) := body;`, with the `def` keyword already peeked.
    pub(crate) fn macro_def(&mut self) -> Result<MacroDef, LogicError> {
        self.advance();
        let (line, col) = self.location();
        let name = self.ident()?;
        if AtomKind::from_name(&name).is_some() {
            return Err(LogicError::Syntax {
                line,
                col,
                msg: format!("`{name}` is a built-in relation"),
            });
        }
        let params = self.ident_list()?;
        for (i, p) in params.iter().enumerate() {
            if params[..i].contains(p) {
                return Err(LogicError::Syntax {
                    line,
                    col,
                    msg: format!("parameter `{p}` of `{name}` is repeated"),
                });
            }
        }
        self.expect(&Tok::Assign)?;
        let body = self.formula()?;
        self.expect(&Tok::Semi)?;
        Ok(MacroDef { name, params, body })
    }

    pub(crate) fn at_def(&self) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == "def")
    }
}

/// Parses a single formula.
pub fn parse(text: &str) -> Result<Formula, LogicError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if !p.at_eof() {
        return Err(p.error(format!("unexpected {}", p.peek().describe())));
    }
    Ok(f)
}

/// Parses macro definitions followed by the main formula, and checks that
/// every call names a known macro with the right arity and argument sorts.
pub fn parse_formula(text: &str) -> Result<FormulaFile, LogicError> {
    let mut p = Parser::new(text)?;
    let mut defs = Vec::new();
    while p.at_def() {
        defs.push(p.macro_def()?);
    }
    let main = p.formula()?;
    p.eat(&Tok::Semi);
    if !p.at_eof() {
        return Err(p.error(format!("unexpected {}", p.peek().describe())));
    }
    check_defs(&defs)?;
    check_calls(&main, &defs)?;
    Ok(FormulaFile { defs, main })
}

/// Definitions are unique, their bodies use only parameters, and calls
/// inside them resolve.
pub(crate) fn check_defs(defs: &[MacroDef]) -> Result<(), LogicError> {
    let mut seen = HashMap::new();
    for d in defs {
        if seen.insert(d.name.as_str(), ()).is_some() {
            return Err(LogicError::DuplicateMacro(d.name.clone()));
        }
        if let Some(v) = d.body.free_vars().into_iter().find(|v| !d.params.contains(v)) {
            return Err(LogicError::MacroFreeVar {
                name: d.name.clone(),
                var: v,
            });
        }
        check_calls(&d.body, defs)?;
    }
    Ok(())
}

pub(crate) fn check_calls(f: &Formula, defs: &[MacroDef]) -> Result<(), LogicError> {
    let mut result = Ok(());
    f.visit(&mut |g| {
        if result.is_err() {
            return;
        }
        if let Formula::Call(name, args) = g {
            result = check_call(name, args, defs);
        }
    });
    result
}

fn check_call(name: &str, args: &[String], defs: &[MacroDef]) -> Result<(), LogicError> {
    let def = defs
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| LogicError::UnboundMacro(name.to_string()))?;
    if def.params.len() != args.len() {
        return Err(LogicError::Arity {
            name: name.to_string(),
            expected: def.params.len(),
            found: args.len(),
        });
    }
    for (p, a) in def.params.iter().zip(args) {
        if Sort::of_name(p) != Sort::of_name(a) {
            return Err(LogicError::CallSort {
                name: name.to_string(),
                param: p.clone(),
                arg: a.clone(),
            });
        }
    }
    Ok(())
}
