//! Bottom-up exploration of reachable macro-states, shared by the product
//! and subset constructions.
//!
//! States are discovered round by round. In each round every child pair
//! that involves a state discovered in the previous round is expanded; the
//! expansions run in parallel and are then interned sequentially in pair
//! order, so state numbering is independent of scheduling.

use std::collections::HashMap;
use std::hash::Hash;

use super::{partition, Guard, Rules, StateId, TreeAutomaton};

pub(crate) struct Explored<S> {
    pub automaton: TreeAutomaton,
    #[allow(dead_code)]
    pub states: Vec<S>,
}

/// `step` must return a total partition of the symbols for the given child
/// pair. Macro-states equal to `dead` are absorbing and non-final; they
/// become the sink of the result.
pub(crate) fn explore<S, F, A>(width: usize, initial: S, dead: Option<S>, is_final: A, step: F) -> Explored<S>
where
    S: Clone + Eq + Hash + Send + Sync,
    F: Fn(&S, &S) -> Vec<(Guard, S)> + Sync + Send,
    A: Fn(&S) -> bool,
{
    let mut states = vec![initial.clone()];
    let mut index: HashMap<S, StateId> = HashMap::from([(initial, 0)]);
    let mut dead_id = dead.as_ref().and_then(|d| index.get(d).copied());
    let mut rules = Rules::new();
    let mut processed = 0;

    while processed < states.len() {
        let n = states.len();
        let mut pairs = Vec::new();
        for l in 0..n {
            for r in 0..n {
                if (l >= processed || r >= processed) && Some(l) != dead_id && Some(r) != dead_id {
                    pairs.push((l, r));
                }
            }
        }
        let expanded = crate::par::map(&pairs, |&(l, r)| step(&states[l], &states[r]));
        for (&(l, r), entries) in pairs.iter().zip(expanded) {
            debug_assert!(partition::is_total(width, &entries));
            let mut out = Vec::with_capacity(entries.len());
            for (g, s) in entries {
                let id = match index.get(&s) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        if dead.as_ref() == Some(&s) {
                            dead_id = Some(id);
                        }
                        states.push(s.clone());
                        index.insert(s, id);
                        id
                    }
                };
                if Some(id) != dead_id {
                    out.push((g, id));
                }
            }
            if !out.is_empty() {
                rules.insert((l, r), partition::compact(width, &out));
            }
        }
        processed = n;
    }

    let finals = states.iter().map(|s| dead.as_ref() != Some(s) && is_final(s)).collect();
    let automaton = TreeAutomaton::from_raw(width, states.len(), 0, finals, dead_id, true, rules);
    Explored { automaton, states }
}
