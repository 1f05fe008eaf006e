use super::explore::explore;
use super::{Result, StateId, TreeAutomaton};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Combine {
    Intersection,
    Union,
}

impl TreeAutomaton {
    /// Product automaton accepting `T(self) ∩ T(other)`.
    pub fn intersect(&self, other: &TreeAutomaton) -> Result<TreeAutomaton> {
        self.product(other, Combine::Intersection)
    }

    /// Product automaton accepting `T(self) ∪ T(other)`.
    pub fn union(&self, other: &TreeAutomaton) -> Result<TreeAutomaton> {
        self.product(other, Combine::Union)
    }

    fn product(&self, other: &TreeAutomaton, mode: Combine) -> Result<TreeAutomaton> {
        self.same_width(other)?;
        let a = self.determinize_if_needed();
        let b = other.determinize_if_needed();

        // `None` stands for every pair that can no longer be accepted.
        let merge = |p: StateId, q: StateId| -> Option<(StateId, StateId)> {
            let dead = match mode {
                Combine::Intersection => a.is_dead(p) || b.is_dead(q),
                Combine::Union => a.is_dead(p) && b.is_dead(q),
            };
            (!dead).then_some((p, q))
        };
        let partitions_a = a.partition_table();
        let partitions_b = b.partition_table();

        let explored = explore(
            a.width,
            merge(a.initial, b.initial),
            Some(None),
            |s| match *s {
                None => false,
                Some((p, q)) => match mode {
                    Combine::Intersection => a.is_final(p) && b.is_final(q),
                    Combine::Union => a.is_final(p) || b.is_final(q),
                },
            },
            |left, right| {
                let (Some((pl, ql)), Some((pr, qr))) = (left, right) else {
                    unreachable!("dead states are never expanded")
                };
                let pa = partitions_a.get(*pl, *pr);
                let pb = partitions_b.get(*ql, *qr);
                let mut out = Vec::with_capacity(pa.len() * pb.len());
                for (ga, ta) in pa.iter() {
                    for (gb, tb) in pb.iter() {
                        if let Some(g) = ga.intersect(gb) {
                            out.push((g, merge(*ta, *tb)));
                        }
                    }
                }
                out
            },
        );
        Ok(explored.automaton)
    }
}

/// Precomputed total partitions for every listed pair of a deterministic
/// automaton; unlisted pairs map everything to the sink.
pub(crate) struct PartitionTable<'a> {
    aut: &'a TreeAutomaton,
    listed: std::collections::HashMap<(StateId, StateId), Vec<(super::Guard, StateId)>>,
    to_sink: Vec<(super::Guard, StateId)>,
}

impl PartitionTable<'_> {
    pub(crate) fn get(&self, l: StateId, r: StateId) -> std::borrow::Cow<'_, [(super::Guard, StateId)]> {
        if let Some(s) = self.aut.sink {
            if l == s || r == s {
                return std::borrow::Cow::Borrowed(&self.to_sink);
            }
        }
        match self.listed.get(&(l, r)) {
            Some(p) => std::borrow::Cow::Borrowed(p),
            None => std::borrow::Cow::Borrowed(&self.to_sink),
        }
    }
}

impl TreeAutomaton {
    pub(crate) fn partition_table(&self) -> PartitionTable<'_> {
        debug_assert!(self.deterministic);
        let listed = self
            .rules
            .keys()
            .map(|&(l, r)| ((l, r), self.complete_partition(l, r)))
            .collect();
        let to_sink = self
            .sink
            .map(|s| vec![(super::Guard::full(self.width), s)])
            .unwrap_or_default();
        PartitionTable {
            aut: self,
            listed,
            to_sink,
        }
    }
}
