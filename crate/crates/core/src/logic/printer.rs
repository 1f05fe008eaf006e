//! Canonical printing. Output reparses to the same tree: binary operators
//! get parentheses only where associativity or binding strength requires
//! them, and a quantifier is parenthesized whenever it sits under an
//! operator.

use std::fmt;

use super::ast::{Formula, MacroDef};

const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const ATOMIC: u8 = 6;

fn strength(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Not(..) => NOT,
        Formula::Exists1(..) | Formula::Exists2(..) | Formula::Forall1(..) | Formula::Forall2(..) => QUANT,
        _ => ATOMIC,
    }
}

fn write(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parens = strength(f) < min;
    if parens {
        out.write_str("(")?;
    }
    match f {
        Formula::True => out.write_str("true")?,
        Formula::False => out.write_str("false")?,
        Formula::Atom(kind, args) => write!(out, "{}({})", kind.name(), args.join(", "))?,
        Formula::Call(name, args) => write!(out, "{name}({})", args.join(", "))?,
        Formula::Not(a) => {
            out.write_str("~")?;
            write(a, NOT, out)?;
        }
        Formula::And(a, b) => binary(a, " & ", b, AND, AND + 1, out)?,
        Formula::Or(a, b) => binary(a, " | ", b, OR, OR + 1, out)?,
        Formula::Implies(a, b) => binary(a, " -> ", b, IMPLIES + 1, IMPLIES, out)?,
        Formula::Iff(a, b) => binary(a, " <-> ", b, IFF, IFF + 1, out)?,
        Formula::Exists1(v, a) | Formula::Exists2(v, a) | Formula::Forall1(v, a) | Formula::Forall2(v, a) => {
            let kw = match f {
                Formula::Exists1(..) => "ex1",
                Formula::Exists2(..) => "ex2",
                Formula::Forall1(..) => "all1",
                _ => "all2",
            };
            write!(out, "{kw} {v}. ")?;
            write(a, QUANT, out)?;
        }
    }
    if parens {
        out.write_str(")")?;
    }
    Ok(())
}

fn binary(a: &Formula, op: &str, b: &Formula, left: u8, right: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    // A quantifier operand always gets parentheses.
    write(a, left.max(1), out)?;
    out.write_str(op)?;
    write(b, right.max(1), out)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(self, QUANT, f)
    }
}

impl fmt::Display for MacroDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "def {}({}) := {};", self.name, self.params.join(", "), self.body)
    }
}
