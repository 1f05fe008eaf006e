//! Minimization by partition refinement.
//!
//! Unreachable states are dropped first. Starting from {finals, non-finals},
//! a class is split whenever two of its states disagree on the class reached
//! through some symbol with some partner state in either child position.
//! At the fixpoint the classes form the coarsest congruence, and the
//! quotient is the minimal total deterministic automaton.

use std::collections::HashMap;

use super::partition::{canonical_key, compact};
use super::{AutomatonError, Guard, Result, Rules, StateId, TreeAutomaton};

impl TreeAutomaton {
    /// Minimal deterministic automaton for the same language. The initial
    /// state of the result is 0 and the sink, when there is a dead state, is
    /// the last one.
    pub fn minimize(&self) -> Result<TreeAutomaton> {
        if !self.deterministic {
            return Err(AutomatonError::NotDeterministic);
        }
        Ok(self.minimal())
    }

    /// [`TreeAutomaton::minimize`], determinizing first when needed.
    pub fn minimal(&self) -> TreeAutomaton {
        if !self.deterministic {
            return self.determinize().minimal();
        }
        let reach: Vec<StateId> = self.reachable_states().into_iter().collect();
        let mut idx = vec![usize::MAX; self.num_states];
        for (i, &q) in reach.iter().enumerate() {
            idx[q] = i;
        }
        let table = self.partition_table();
        let width = self.width;

        let mut class: Vec<u32> = renumber(reach.iter().map(|&q| self.finals[q]));
        let mut count = distinct(&class);
        loop {
            let signatures = crate::par::map(&reach, |&q| {
                let mut sig = vec![class[idx[q]]];
                for &r in &reach {
                    for (x, y) in [(q, r), (r, q)] {
                        let mapped: Vec<(Guard, u32)> = table
                            .get(x, y)
                            .iter()
                            .map(|&(g, t)| (g, class[idx[t]]))
                            .collect();
                        let key = canonical_key(width, &mapped);
                        sig.push(key.len() as u32);
                        sig.extend(key);
                    }
                }
                sig
            });
            let refined = renumber(signatures.into_iter());
            let refined_count = distinct(&refined);
            class = refined;
            if refined_count == count {
                break;
            }
            count = refined_count;
        }

        let k = count;
        let mut rep = vec![usize::MAX; k];
        for (i, &q) in reach.iter().enumerate() {
            let c = class[i] as usize;
            if rep[c] == usize::MAX {
                rep[c] = q;
            }
        }
        let class_of = |q: StateId| class[idx[q]] as usize;
        let part = |a: usize, b: usize| -> Vec<(Guard, usize)> {
            table
                .get(rep[a], rep[b])
                .iter()
                .map(|&(g, t)| (g, class_of(t)))
                .collect()
        };

        let dead = (0..k).find(|&c| {
            !self.finals[rep[c]]
                && (0..k).all(|o| {
                    part(c, o).iter().all(|&(_, t)| t == c) && part(o, c).iter().all(|&(_, t)| t == c)
                })
        });

        // Renumber in discovery order from the initial class, sink last.
        let mut order: Vec<usize> = vec![class_of(self.initial)];
        let mut new_id = vec![usize::MAX; k];
        new_id[order[0]] = 0;
        let mut processed = 0;
        while processed < order.len() {
            let n = order.len();
            for i in 0..n {
                for j in 0..n {
                    if i < processed && j < processed {
                        continue;
                    }
                    let (a, b) = (order[i], order[j]);
                    if Some(a) == dead || Some(b) == dead {
                        continue;
                    }
                    let mut targets: Vec<(Guard, usize)> = compact(width, &part(a, b));
                    targets.retain(|&(_, t)| Some(t) != dead);
                    for (_, t) in targets {
                        if new_id[t] == usize::MAX {
                            new_id[t] = order.len();
                            order.push(t);
                        }
                    }
                }
            }
            processed = n;
        }
        if let Some(d) = dead {
            if new_id[d] == usize::MAX {
                new_id[d] = order.len();
                order.push(d);
            } else {
                // The initial class is dead: it is the only state.
                debug_assert_eq!(order.len(), 1);
            }
        }
        debug_assert_eq!(order.len(), k);

        let mut rules = Rules::new();
        for &a in &order {
            for &b in &order {
                if Some(a) == dead || Some(b) == dead {
                    continue;
                }
                let mapped: Vec<(Guard, StateId)> = part(a, b)
                    .into_iter()
                    .filter(|&(_, t)| Some(t) != dead)
                    .map(|(g, t)| (g, new_id[t]))
                    .collect();
                if !mapped.is_empty() {
                    rules.insert((new_id[a], new_id[b]), compact(width, &mapped));
                }
            }
        }
        let mut finals = vec![false; k];
        for c in 0..k {
            finals[new_id[c]] = self.finals[rep[c]];
        }
        TreeAutomaton::from_raw(width, k, 0, finals, dead.map(|d| new_id[d]), true, rules)
    }
}

/// Dense class ids in order of first appearance.
fn renumber<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<u32> {
    let mut seen: HashMap<K, u32> = HashMap::new();
    keys.map(|key| {
        let next = seen.len() as u32;
        *seen.entry(key).or_insert(next)
    })
    .collect()
}

fn distinct(class: &[u32]) -> usize {
    class.iter().copied().max().map_or(0, |m| m as usize + 1)
}
