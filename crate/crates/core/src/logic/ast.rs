use std::collections::BTreeSet;

/// Variable sort, fixed by the case of the first letter of its name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    /// Lowercase: a single node.
    First,
    /// Uppercase: a finite set of nodes.
    Second,
}

impl Sort {
    pub fn of_name(name: &str) -> Sort {
        if name.chars().next().is_some_and(char::is_uppercase) {
            Sort::Second
        } else {
            Sort::First
        }
    }
}

impl std::fmt::Display for Sort {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sort::First => "first-order",
            Sort::Second => "second-order",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    /// `rdom(x,y)`: x dominates y or x = y.
    RDom,
    /// `pdom(x,y)`: x properly dominates y.
    PDom,
    /// `idom(x,y)`: y is a child of x.
    IDom,
    /// `prec(x,y)`: x is in the left and y in the right subtree of some node.
    Prec,
    /// `in(x,X)`.
    In,
    /// `sub(X,Y)`.
    Sub,
    /// `eqset(X,Y)`.
    EqSet,
    /// `eq1(x,y)`.
    Eq1,
    /// `sing(X)`: X has exactly one element.
    Sing,
}

impl AtomKind {
    pub const ALL: [AtomKind; 9] = [
        AtomKind::RDom,
        AtomKind::PDom,
        AtomKind::IDom,
        AtomKind::Prec,
        AtomKind::In,
        AtomKind::Sub,
        AtomKind::EqSet,
        AtomKind::Eq1,
        AtomKind::Sing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AtomKind::RDom => "rdom",
            AtomKind::PDom => "pdom",
            AtomKind::IDom => "idom",
            AtomKind::Prec => "prec",
            AtomKind::In => "in",
            AtomKind::Sub => "sub",
            AtomKind::EqSet => "eqset",
            AtomKind::Eq1 => "eq1",
            AtomKind::Sing => "sing",
        }
    }

    pub fn from_name(name: &str) -> Option<AtomKind> {
        AtomKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn arg_sorts(self) -> &'static [Sort] {
        use Sort::*;
        match self {
            AtomKind::RDom | AtomKind::PDom | AtomKind::IDom | AtomKind::Prec | AtomKind::Eq1 => &[First, First],
            AtomKind::In => &[First, Second],
            AtomKind::Sub | AtomKind::EqSet => &[Second, Second],
            AtomKind::Sing => &[Second],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(AtomKind, Vec<String>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists1(String, Box<Formula>),
    Exists2(String, Box<Formula>),
    Forall1(String, Box<Formula>),
    Forall2(String, Box<Formula>),
    Call(String, Vec<String>),
}

/// Quantifier kinds, for code that treats the four binders uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Formula {
    pub fn atom(kind: AtomKind, args: &[&str]) -> Formula {
        Formula::Atom(kind, args.iter().map(|s| s.to_string()).collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Builds the binder matching the variable's sort.
    pub fn quantify(q: Quantifier, var: &str, body: Formula) -> Formula {
        let (v, b) = (var.to_string(), Box::new(body));
        match (q, Sort::of_name(var)) {
            (Quantifier::Exists, Sort::First) => Formula::Exists1(v, b),
            (Quantifier::Exists, Sort::Second) => Formula::Exists2(v, b),
            (Quantifier::Forall, Sort::First) => Formula::Forall1(v, b),
            (Quantifier::Forall, Sort::Second) => Formula::Forall2(v, b),
        }
    }

    /// Conjunction of all formulas, `true` for none.
    pub fn conjoin(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// `(quantifier, sort, variable, body)` for binders.
    pub fn as_binder(&self) -> Option<(Quantifier, Sort, &str, &Formula)> {
        match self {
            Formula::Exists1(v, b) => Some((Quantifier::Exists, Sort::First, v, b)),
            Formula::Exists2(v, b) => Some((Quantifier::Exists, Sort::Second, v, b)),
            Formula::Forall1(v, b) => Some((Quantifier::Forall, Sort::First, v, b)),
            Formula::Forall2(v, b) => Some((Quantifier::Forall, Sort::Second, v, b)),
            _ => None,
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) | Formula::Call(_, args) => {
                for a in args {
                    note(a, bound);
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists1(v, f) | Formula::Exists2(v, f) | Formula::Forall1(v, f) | Formula::Forall2(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, args) | Formula::Call(_, args) => out.extend(args.iter().cloned()),
            Formula::Exists1(v, _) | Formula::Exists2(v, _) | Formula::Forall1(v, _) | Formula::Forall2(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Preorder traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Exists1(_, a) | Formula::Exists2(_, a) | Formula::Forall1(_, a) | Formula::Forall2(_, a) => {
                a.visit(f)
            }
            _ => {}
        }
    }

    pub fn has_calls(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Call(..)));
        found
    }

    /// Number of quantifiers.
    pub fn quantifier_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| n += usize::from(f.as_binder().is_some()));
        n
    }

    /// Rewrites `->`, `<->` and universal quantifiers into `~`, `&`, `|`
    /// and existentials.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Call(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.desugar()),
            Formula::And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Formula::Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Formula::Implies(a, b) => Formula::or(Formula::not(a.desugar()), b.desugar()),
            Formula::Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::and(
                    Formula::or(Formula::not(a.clone()), b.clone()),
                    Formula::or(Formula::not(b), a),
                )
            }
            Formula::Exists1(v, a) => Formula::Exists1(v.clone(), Box::new(a.desugar())),
            Formula::Exists2(v, a) => Formula::Exists2(v.clone(), Box::new(a.desugar())),
            Formula::Forall1(v, a) => Formula::not(Formula::Exists1(v.clone(), Box::new(Formula::not(a.desugar())))),
            Formula::Forall2(v, a) => Formula::not(Formula::Exists2(v.clone(), Box::new(Formula::not(a.desugar())))),
        }
    }
}

/// `def Name(params) := body;`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroDef {
    pub name: String,
    pub params: Vec<String>,
    pub body: Formula,
}

/// Macro definitions followed by one main formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaFile {
    pub defs: Vec<MacroDef>,
    pub main: Formula,
}
