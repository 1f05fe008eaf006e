use std::cmp::Ordering;

use super::{LabeledTree, StateId, TreeAutomaton};

impl TreeAutomaton {
    /// A smallest accepted tree, or `None` if the language is empty.
    ///
    /// Every reachable state gets a representative tree, improved by
    /// relaxation until no child pair yields a better one. Trees are ordered
    /// by node count, then by their preorder label sequence; each guard
    /// contributes its least instance.
    pub fn witness(&self) -> Option<LabeledTree> {
        if !self.deterministic {
            return self.determinize().witness();
        }
        let n = self.num_states;
        let mut best: Vec<Option<LabeledTree>> = vec![None; n];
        best[self.initial] = Some(LabeledTree::Empty);
        let table = self.partition_table();

        let mut changed = true;
        while changed {
            changed = false;
            let known: Vec<StateId> = (0..n).filter(|&q| best[q].is_some()).collect();
            for &l in &known {
                for &r in &known {
                    for &(g, t) in table.get(l, r).iter() {
                        let (Some(lt), Some(rt)) = (&best[l], &best[r]) else { unreachable!() };
                        let candidate = LabeledTree::node(g.least_instance(), lt.clone(), rt.clone());
                        let better = match &best[t] {
                            None => true,
                            Some(current) => candidate.witness_cmp(current) == Ordering::Less,
                        };
                        if better {
                            best[t] = Some(candidate);
                            changed = true;
                        }
                    }
                }
            }
        }

        (0..n)
            .filter(|&q| self.finals[q])
            .filter_map(|q| best[q].clone())
            .min_by(|a, b| a.witness_cmp(b))
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn empty_and_trivial() {
        assert_eq!(TreeAutomaton::empty(2).witness(), None);
        assert_eq!(TreeAutomaton::universal(3).witness(), Some(LabeledTree::Empty));
    }

    #[test]
    fn ac_com_witness_is_size_minimal() {
        let w = ac_com().witness().unwrap();
        assert_eq!(w.size(), 4);
        assert!(ac_com().run_membership(&w).unwrap());
        let smaller_accepted = LabeledTree::enumerate(2, 3)
            .iter()
            .any(|t| ac_com().run_membership(t).unwrap());
        assert!(!smaller_accepted);
    }

    #[test]
    fn nondeterministic_input_is_handled() {
        let w = ac_com().project(1).unwrap().witness().unwrap();
        assert_eq!(w.size(), 4);
    }
}
