//! Closure under adding and pruning all-zero frontier nodes.
//!
//! Two trees are equivalent when they agree after every maximal all-zero
//! subtree is replaced by the empty tree. The closure accepts a tree iff
//! some equivalent tree is accepted. It is computed by adding one state ζ
//! for "an all-zero subtree", which may stand for any state that the input
//! automaton reaches on some all-zero tree.

use std::collections::BTreeSet;

use crate::automaton::{BitString, Guard, TreeAutomaton};

pub fn zero_pad_closure(a: &TreeAutomaton) -> TreeAutomaton {
    let width = a.width();
    let zero = Guard::zero(width);
    let zero_symbol = BitString::zero(width);
    let det = a.is_deterministic();
    let n = a.num_states();

    // Successor entries of a pair, with the implicit sink made explicit.
    let entries = |l: usize, r: usize| -> Vec<(Guard, usize)> {
        if det {
            a.complete_partition(l, r)
        } else {
            a.transitions_for(l, r).to_vec()
        }
    };

    // States reached by all-zero trees.
    let mut zeros = BTreeSet::from([a.initial()]);
    loop {
        let mut grown = zeros.clone();
        for &l in &zeros {
            for &r in &zeros {
                let hits = entries(l, r).into_iter().filter(|(g, _)| g.matches(zero_symbol));
                grown.extend(hits.map(|(_, t)| t));
            }
        }
        if grown == zeros {
            break;
        }
        zeros = grown;
    }

    let zeta = n;
    let mut out: Vec<(usize, usize, Guard, usize)> = Vec::new();
    let add = |l: usize, r: usize, es: Vec<(Guard, usize)>, out: &mut Vec<_>| {
        out.extend(es.into_iter().map(|(g, t)| (l, r, g, t)));
    };
    for l in 0..n {
        for r in 0..n {
            add(l, r, entries(l, r), &mut out);
        }
    }
    for &z in &zeros {
        for q in 0..n {
            add(zeta, q, entries(z, q), &mut out);
            add(q, zeta, entries(q, z), &mut out);
        }
        for &z2 in &zeros {
            let nonzero = entries(z, z2)
                .into_iter()
                .flat_map(|(g, t)| g.subtract(&zero).into_iter().map(move |h| (h, t)))
                .collect();
            add(zeta, zeta, nonzero, &mut out);
        }
    }
    out.push((zeta, zeta, zero, zeta));

    let mut finals: Vec<usize> = a.finals().collect();
    if zeros.iter().any(|&z| a.is_final(z)) {
        finals.push(zeta);
    }
    let nfa = TreeAutomaton::from_parts(width, n + 1, zeta, finals, None, false, out)
        .expect("closure construction is well-formed");
    nfa.determinize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::LabeledTree;

    fn tree(s: &str) -> LabeledTree {
        LabeledTree::parse(s).unwrap()
    }

    /// Accepts exactly the tree `(1 () (0 () ()))`.
    fn single_tree() -> TreeAutomaton {
        let g = |s: &str| Guard::parse(s).unwrap();
        TreeAutomaton::from_parts(1, 4, 0, [2], Some(3), true, [(0, 0, g("0"), 1), (0, 1, g("1"), 2)]).unwrap()
    }

    #[test]
    fn closure_of_a_single_tree() {
        let c = zero_pad_closure(&single_tree());
        for t in ["(1 () ())", "(1 () (0 () ()))", "(1 (0 () ()) (0 (0 () ()) ()))", "(1 (0 (0 () ()) ()) ())"] {
            assert!(c.run_membership(&tree(t)).unwrap(), "{t}");
        }
        for t in ["()", "(0 () (1 () ()))", "(1 (1 () ()) ())", "(0 () ())"] {
            assert!(!c.run_membership(&tree(t)).unwrap(), "{t}");
        }
    }

    #[test]
    fn closure_is_idempotent_and_preserves_emptiness() {
        let once = zero_pad_closure(&single_tree());
        assert!(zero_pad_closure(&once).equivalent(&once).unwrap());
        assert!(zero_pad_closure(&TreeAutomaton::empty(2)).is_empty());
        let universal = TreeAutomaton::universal(0);
        assert!(zero_pad_closure(&universal).equivalent(&universal).unwrap());
    }

    #[test]
    fn zero_symbol_at_width_zero() {
        // At width 0 every tree is all-zero, so the closure of any nonempty
        // language is everything.
        let g = Guard::full(0);
        let one_node = TreeAutomaton::from_parts(0, 3, 0, [1], Some(2), true, [(0, 0, g, 1)]).unwrap();
        let c = zero_pad_closure(&one_node);
        assert!(c.equivalent(&TreeAutomaton::universal(0)).unwrap());
        assert!(c.run_membership(&LabeledTree::leaf(BitString::zero(0))).unwrap());
    }
}
