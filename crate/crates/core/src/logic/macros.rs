use std::collections::{BTreeSet, HashMap};

use super::ast::{Formula, MacroDef};
use super::parser::check_calls;
use super::LogicError;

/// Replaces every call by the macro body with parameters substituted.
pub fn expand_macros(f: &Formula, defs: &[MacroDef]) -> Result<Formula, LogicError> {
    check_calls(f, defs)?;
    expand(f, defs, &mut Vec::new())
}

fn expand(f: &Formula, defs: &[MacroDef], active: &mut Vec<String>) -> Result<Formula, LogicError> {
    let rec = |g: &Formula, active: &mut Vec<String>| expand(g, defs, active).map(Box::new);
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(..) => f.clone(),
        Formula::Not(a) => Formula::Not(rec(a, active)?),
        Formula::And(a, b) => Formula::And(rec(a, active)?, rec(b, active)?),
        Formula::Or(a, b) => Formula::Or(rec(a, active)?, rec(b, active)?),
        Formula::Implies(a, b) => Formula::Implies(rec(a, active)?, rec(b, active)?),
        Formula::Iff(a, b) => Formula::Iff(rec(a, active)?, rec(b, active)?),
        Formula::Exists1(v, a) => Formula::Exists1(v.clone(), rec(a, active)?),
        Formula::Exists2(v, a) => Formula::Exists2(v.clone(), rec(a, active)?),
        Formula::Forall1(v, a) => Formula::Forall1(v.clone(), rec(a, active)?),
        Formula::Forall2(v, a) => Formula::Forall2(v.clone(), rec(a, active)?),
        Formula::Call(name, args) => {
            if active.contains(name) {
                return Err(LogicError::Recursion(name.clone()));
            }
            let def = defs
                .iter()
                .find(|d| &d.name == name)
                .ok_or_else(|| LogicError::UnboundMacro(name.clone()))?;
            check_calls(f, defs)?;
            let map: HashMap<String, String> = def.params.iter().cloned().zip(args.iter().cloned()).collect();
            let body = substitute(&def.body, &map);
            active.push(name.clone());
            let out = expand(&body, defs, active);
            active.pop();
            out?
        }
    })
}

/// Capture-avoiding renaming of free variables. Binders that would capture
/// a substituted name are renamed by appending primes.
pub fn substitute(f: &Formula, map: &HashMap<String, String>) -> Formula {
    let rename = |args: &[String]| args.iter().map(|a| map.get(a).unwrap_or(a).clone()).collect();
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(kind, args) => Formula::Atom(*kind, rename(args)),
        Formula::Call(name, args) => Formula::Call(name.clone(), rename(args)),
        Formula::Not(a) => Formula::not(substitute(a, map)),
        Formula::And(a, b) => Formula::and(substitute(a, map), substitute(b, map)),
        Formula::Or(a, b) => Formula::or(substitute(a, map), substitute(b, map)),
        Formula::Implies(a, b) => Formula::implies(substitute(a, map), substitute(b, map)),
        Formula::Iff(a, b) => Formula::iff(substitute(a, map), substitute(b, map)),
        _ => {
            let (q, _, v, body) = f.as_binder().expect("remaining variants are binders");
            let mut inner = map.clone();
            inner.remove(v);
            let free = body.free_vars();
            let captured = free.iter().any(|x| x != v && inner.get(x).is_some_and(|t| t == v));
            if captured {
                let mut avoid: BTreeSet<String> = body.all_vars();
                avoid.extend(inner.values().cloned());
                let mut fresh = format!("{v}'");
                while avoid.contains(&fresh) {
                    fresh.push('\'');
                }
                inner.insert(v.to_string(), fresh.clone());
                Formula::quantify(q, &fresh, substitute(body, &inner))
            } else {
                Formula::quantify(q, v, substitute(body, &inner))
            }
        }
    }
}
