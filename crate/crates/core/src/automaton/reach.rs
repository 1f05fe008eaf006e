use std::collections::BTreeSet;

use super::{partition, StateId, TreeAutomaton};

/// Result of the reachable-states fixpoint, with loop instrumentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability {
    pub states: BTreeSet<StateId>,
    /// Passes through the main loop, including the final one that finds
    /// nothing new.
    pub passes: usize,
    /// Child pairs looked up in the transition table.
    pub probes: usize,
    /// Set when the search stopped at the first final state.
    pub stopped_early: bool,
}

impl TreeAutomaton {
    /// Every symbol the automaton can produce from one child pair, as target
    /// states (includes the implicit sink when some symbol is uncovered).
    fn pair_targets(&self, l: StateId, r: StateId, out: &mut BTreeSet<StateId>) {
        if let Some(s) = self.sink {
            if l == s || r == s {
                out.insert(s);
                return;
            }
        }
        let entries = self.transitions_for(l, r);
        out.extend(entries.iter().map(|&(_, t)| t));
        if self.deterministic {
            if let Some(s) = self.sink {
                if !partition::is_total(self.width, entries) {
                    out.insert(s);
                }
            }
        }
    }

    fn reach(&self, stop_at_final: bool) -> Reachability {
        let mut reached = BTreeSet::from([self.initial]);
        let mut passes = 0;
        let mut probes = 0;
        if stop_at_final && self.finals[self.initial] {
            return Reachability {
                states: reached,
                passes,
                probes,
                stopped_early: true,
            };
        }
        loop {
            passes += 1;
            let mut fresh = BTreeSet::new();
            let current: Vec<StateId> = reached.iter().copied().collect();
            for &l in &current {
                for &r in &current {
                    probes += 1;
                    self.pair_targets(l, r, &mut fresh);
                }
            }
            let new: Vec<StateId> = fresh.difference(&reached).copied().collect();
            if new.is_empty() {
                return Reachability {
                    states: reached,
                    passes,
                    probes,
                    stopped_early: false,
                };
            }
            let hit_final = new.iter().any(|&q| self.finals[q]);
            reached.extend(new);
            if stop_at_final && hit_final {
                return Reachability {
                    states: reached,
                    passes,
                    probes,
                    stopped_early: true,
                };
            }
        }
    }

    /// Least set containing the initial state and closed under the
    /// transition function, computed pass by pass.
    pub fn reachable_states(&self) -> BTreeSet<StateId> {
        self.reach(false).states
    }

    /// [`TreeAutomaton::reachable_states`] with its pass and probe counters.
    pub fn reachability(&self) -> Reachability {
        self.reach(false)
    }

    /// No final state is reachable. Stops at the first reachable final.
    pub fn is_empty(&self) -> bool {
        !self.reach(true).stopped_early
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn ac_com_reaches_everything() {
        let r = ac_com().reachability();
        assert_eq!(r.states, (0..6).collect());
        assert!(r.passes <= 6);
        assert!(!ac_com().is_empty());
    }

    #[test]
    fn trivial_cases() {
        let single = TreeAutomaton::empty(2);
        assert_eq!(single.reachable_states(), BTreeSet::from([0]));
        assert!(single.is_empty());
        let loops = TreeAutomaton::from_parts(1, 2, 0, [1], Some(1), true, [(0, 0, g("*"), 0)]).unwrap();
        assert_eq!(loops.reachable_states(), BTreeSet::from([0]));
        assert!(loops.is_empty());
        assert!(!TreeAutomaton::universal(0).is_empty());
    }
}
