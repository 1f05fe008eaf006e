//! Automata for the atomic relations, built by brute force over the
//! argument bits and then spread over the full width.
//!
//! First-order arguments are not assumed to be singletons here; each
//! relation is read existentially ("some x-node and some y-node are in
//! relation"), which agrees with the intended meaning once the compiler
//! conjoins the singleton constraints.

use crate::automaton::{AutomatonError, Guard, TreeAutomaton};
use crate::logic::AtomKind;

/// Deterministic automaton for `kind` over `width` bits, reading argument
/// `k` from bit `positions[k]`. Positions may repeat (as in `prec(x,x)`);
/// all other bits are don't-care.
pub fn base_automaton(kind: AtomKind, positions: &[usize], width: usize) -> Result<TreeAutomaton, AutomatonError> {
    if positions.len() != kind.arg_sorts().len() {
        return Err(AutomatonError::Invalid(format!(
            "`{}` takes {} arguments, got {}",
            kind.name(),
            kind.arg_sorts().len(),
            positions.len()
        )));
    }
    if let Some(&pos) = positions.iter().find(|&&p| p >= width) {
        return Err(AutomatonError::PositionOutOfRange { pos, width });
    }
    let mut distinct: Vec<usize> = Vec::new();
    for &p in positions {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let slots: Vec<usize> = positions
        .iter()
        .map(|p| distinct.iter().position(|d| d == p).unwrap())
        .collect();
    let relation = Relation::of(kind);
    let k = distinct.len();
    let n = relation.states();

    let mut rules = Vec::new();
    for l in 0..n {
        for r in 0..n {
            for sym in 0..1u64 << k {
                let args: Vec<bool> = slots.iter().map(|&s| sym >> s & 1 == 1).collect();
                let t = relation.step(l, r, &args);
                let guard = distinct
                    .iter()
                    .enumerate()
                    .fold(Guard::full(width), |g, (i, &p)| g.with(p, sym >> i & 1 == 1));
                rules.push((l, r, guard, t));
            }
        }
    }
    let finals = (0..n).filter(|&q| relation.is_final(q));
    let aut = TreeAutomaton::from_parts(width, n, 0, finals, None, true, rules)?;
    Ok(aut.minimal())
}

/// Bottom-up evaluators of the relations. State 0 is always the state of
/// the empty tree.
#[derive(Clone, Copy)]
enum Relation {
    /// 0: none seen, 1: exactly one, 2: more than one.
    Sing,
    /// 0: fine, 1: violated.
    Sub,
    Eq,
    /// 0: nothing, 1: a j-node below, 2: found.
    Dom { reflexive: bool },
    /// 0: nothing, 1: the subtree root is a j-node, 2: found.
    IDom,
    /// 0..4: (has i, has j) as 2*i + j, 4: found.
    Prec,
}

const FOUND_DOM: usize = 2;
const FOUND_PREC: usize = 4;

impl Relation {
    fn of(kind: AtomKind) -> Relation {
        match kind {
            AtomKind::Sing => Relation::Sing,
            AtomKind::In | AtomKind::Sub => Relation::Sub,
            AtomKind::EqSet | AtomKind::Eq1 => Relation::Eq,
            AtomKind::PDom => Relation::Dom { reflexive: false },
            AtomKind::RDom => Relation::Dom { reflexive: true },
            AtomKind::IDom => Relation::IDom,
            AtomKind::Prec => Relation::Prec,
        }
    }

    fn states(self) -> usize {
        match self {
            Relation::Sing | Relation::Dom { .. } | Relation::IDom => 3,
            Relation::Sub | Relation::Eq => 2,
            Relation::Prec => 5,
        }
    }

    fn is_final(self, q: usize) -> bool {
        match self {
            Relation::Sing => q == 1,
            Relation::Sub | Relation::Eq => q == 0,
            Relation::Dom { .. } | Relation::IDom => q == FOUND_DOM,
            Relation::Prec => q == FOUND_PREC,
        }
    }

    fn step(self, l: usize, r: usize, args: &[bool]) -> usize {
        match self {
            Relation::Sing => (l + r + usize::from(args[0])).min(2),
            Relation::Sub => usize::from(l == 1 || r == 1 || (args[0] && !args[1])),
            Relation::Eq => usize::from(l == 1 || r == 1 || args[0] != args[1]),
            Relation::Dom { reflexive } => {
                let (i, j) = (args[0], args[1]);
                let below = l == 1 || r == 1;
                if l == FOUND_DOM || r == FOUND_DOM || (i && below) || (reflexive && i && j) {
                    FOUND_DOM
                } else {
                    usize::from(below || j)
                }
            }
            Relation::IDom => {
                let (i, j) = (args[0], args[1]);
                if l == FOUND_DOM || r == FOUND_DOM || (i && (l == 1 || r == 1)) {
                    FOUND_DOM
                } else {
                    usize::from(j)
                }
            }
            Relation::Prec => {
                if l == FOUND_PREC || r == FOUND_PREC || (l >> 1 == 1 && r & 1 == 1) {
                    return FOUND_PREC;
                }
                let has_i = usize::from(l >> 1 == 1 || r >> 1 == 1 || args[0]);
                let has_j = usize::from(l & 1 == 1 || r & 1 == 1 || args[1]);
                2 * has_i + has_j
            }
        }
    }
}
