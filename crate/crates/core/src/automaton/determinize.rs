use super::explore::explore;
use super::{Guard, StateId, TreeAutomaton};

impl TreeAutomaton {
    /// Subset construction over reachable state sets. The empty set is the
    /// sink of the result; a set is final iff it contains a final state.
    pub fn determinize(&self) -> TreeAutomaton {
        let rules = self.nondeterministic_rules();
        let width = self.width;
        let explored = explore(
            width,
            vec![self.initial],
            Some(Vec::new()),
            |set: &Vec<StateId>| set.iter().any(|&q| self.finals[q]),
            |left: &Vec<StateId>, right: &Vec<StateId>| {
                let mut blocks: Vec<(Guard, Vec<StateId>)> = vec![(Guard::full(width), Vec::new())];
                for &l in left {
                    for &r in right {
                        let Some(entries) = rules.get(&(l, r)) else { continue };
                        for &(g, t) in entries {
                            blocks = refine(blocks, g, t);
                        }
                    }
                }
                blocks
            },
        );
        explored.automaton
    }
}

/// Splits every block against `g`; the part inside `g` gains target `t`.
fn refine(blocks: Vec<(Guard, Vec<StateId>)>, g: Guard, t: StateId) -> Vec<(Guard, Vec<StateId>)> {
    let mut out = Vec::with_capacity(blocks.len() + 1);
    for (b, set) in blocks {
        match b.intersect(&g) {
            None => out.push((b, set)),
            Some(inside) => {
                if set.binary_search(&t).is_ok() {
                    out.push((b, set));
                    continue;
                }
                let mut grown = set.clone();
                let at = grown.binary_search(&t).unwrap_err();
                grown.insert(at, t);
                out.push((inside, grown));
                out.extend(b.subtract(&g).into_iter().map(|rest| (rest, set.clone())));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::automaton::LabeledTree;

    #[test]
    fn determinize_deterministic_input_preserves_language() {
        let a = ac_com();
        let d = a.determinize();
        assert!(d.is_deterministic());
        assert!(d.equivalent(&a).unwrap());
    }

    #[test]
    fn projection_of_singleton_accepts_nonempty_trees() {
        // Exactly one node carries the bit.
        let sing = TreeAutomaton::from_parts(
            1,
            3,
            0,
            [1],
            Some(2),
            true,
            [(0, 0, g("0"), 0), (0, 0, g("1"), 1), (0, 1, g("0"), 1), (1, 0, g("0"), 1)],
        )
        .unwrap();
        let d = sing.project(0).unwrap().determinize();
        assert_eq!(d.width(), 0);
        for t in LabeledTree::enumerate(0, 4) {
            assert_eq!(d.run_membership(&t).unwrap(), !t.is_empty(), "{t}");
        }
    }

    #[test]
    fn no_final_states_gives_empty_language() {
        let a = TreeAutomaton::from_parts(1, 2, 0, [], None, false, [(0, 0, g("*"), 1), (0, 0, g("1"), 0)]).unwrap();
        assert!(a.determinize().is_empty());
    }

    #[test]
    fn projected_ac_com_accepts_erased_witness() {
        let d = ac_com().project(1).unwrap().determinize();
        assert!(d.run_membership(&tree("(0 (1 () ()) (0 (0 () ()) ()))")).unwrap());
    }
}
