//! Bottom-up tree automata over bit-vector alphabets.
//!
//! A [`TreeAutomaton`] reads a [`LabeledTree`] from the leaves up: the empty
//! tree evaluates to the initial state and a node evaluates to
//! `α(left, right, label)`. Transitions are stored per child-state pair as a
//! list of [`Guard`]s. In deterministic mode the guards of one pair are
//! pairwise disjoint and any symbol they leave uncovered goes to the
//! designated sink, so the automaton is total. In nondeterministic mode a
//! pair may carry overlapping guards and uncovered symbols have no
//! successor.

mod determinize;
mod explore;
pub mod guard;
mod minimize;
pub(crate) mod partition;
mod product;
mod reach;
pub mod text;
pub mod tree;
mod witness;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use guard::{BitString, Guard, MAX_WIDTH};
pub use reach::Reachability;
pub use tree::{Address, LabeledTree};

pub type StateId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("operation requires a deterministic automaton")]
    NotDeterministic,
    #[error("bit position {pos} out of range for width {width}")]
    PositionOutOfRange { pos: usize, width: usize },
    #[error("width {0} exceeds the supported maximum of {MAX_WIDTH}")]
    WidthTooLarge(usize),
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, AutomatonError>;

pub(crate) type Rules = BTreeMap<(StateId, StateId), Vec<(Guard, StateId)>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAutomaton {
    width: usize,
    num_states: usize,
    initial: StateId,
    finals: Vec<bool>,
    deterministic: bool,
    sink: Option<StateId>,
    rules: Rules,
}

impl TreeAutomaton {
    /// Checked constructor. `rules` lists `(left, right, guard, target)`.
    pub fn from_parts(
        width: usize,
        num_states: usize,
        initial: StateId,
        finals: impl IntoIterator<Item = StateId>,
        sink: Option<StateId>,
        deterministic: bool,
        rules: impl IntoIterator<Item = (StateId, StateId, Guard, StateId)>,
    ) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(AutomatonError::WidthTooLarge(width));
        }
        let mut final_flags = vec![false; num_states];
        for q in finals {
            if q >= num_states {
                return Err(AutomatonError::Invalid(format!("final state {q} out of range")));
            }
            final_flags[q] = true;
        }
        let mut map = Rules::new();
        for (l, r, g, t) in rules {
            map.entry((l, r)).or_default().push((g, t));
        }
        let aut = TreeAutomaton {
            width,
            num_states,
            initial,
            finals: final_flags,
            deterministic,
            sink,
            rules: map,
        };
        aut.validate()?;
        Ok(aut)
    }

    /// Unchecked constructor for internal constructions.
    pub(crate) fn from_raw(
        width: usize,
        num_states: usize,
        initial: StateId,
        finals: Vec<bool>,
        sink: Option<StateId>,
        deterministic: bool,
        rules: Rules,
    ) -> Self {
        let aut = TreeAutomaton {
            width,
            num_states,
            initial,
            finals,
            deterministic,
            sink,
            rules,
        };
        debug_assert_eq!(aut.validate(), Ok(()));
        aut
    }

    /// The automaton accepting no tree: a single non-final state.
    pub fn empty(width: usize) -> Self {
        TreeAutomaton::from_raw(width, 1, 0, vec![false], Some(0), true, Rules::new())
    }

    /// The automaton accepting every tree of the given width.
    pub fn universal(width: usize) -> Self {
        let mut rules = Rules::new();
        rules.insert((0, 0), vec![(Guard::full(width), 0)]);
        TreeAutomaton::from_raw(width, 1, 0, vec![true], None, true, rules)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_states;
        let bad = |msg: String| Err(AutomatonError::Invalid(msg));
        if self.initial >= n {
            return bad(format!("initial state {} out of range", self.initial));
        }
        if self.finals.len() != n {
            return bad("final flags do not match the state count".into());
        }
        if let Some(s) = self.sink {
            if s >= n {
                return bad(format!("sink {s} out of range"));
            }
            if !self.deterministic {
                return bad("only deterministic automata designate a sink".into());
            }
        }
        for (&(l, r), entries) in &self.rules {
            if l >= n || r >= n {
                return bad(format!("transition from ({l}, {r}) mentions an unknown state"));
            }
            for &(g, t) in entries {
                if t >= n {
                    return bad(format!("transition ({l}, {r}, {g}) targets unknown state {t}"));
                }
                if g.width() != self.width {
                    return Err(AutomatonError::WidthMismatch {
                        expected: self.width,
                        found: g.width(),
                    });
                }
                if let Some(s) = self.sink {
                    if (l == s || r == s) && t != s {
                        return bad(format!("sink {s} must be absorbing"));
                    }
                }
            }
            if self.deterministic && !partition::disjoint(entries) {
                return bad(format!("overlapping guards on ({l}, {r}) in deterministic mode"));
            }
        }
        if self.deterministic && self.sink.is_none() {
            for l in 0..n {
                for r in 0..n {
                    let total = self
                        .rules
                        .get(&(l, r))
                        .is_some_and(|e| partition::is_total(self.width, e));
                    if !total {
                        return bad(format!("pair ({l}, {r}) is incomplete and there is no sink"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states).filter(|&q| self.finals[q])
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn sink(&self) -> Option<StateId> {
        self.sink
    }

    /// A non-final absorbing sink: runs that reach it can never accept.
    pub fn is_dead(&self, q: StateId) -> bool {
        self.sink == Some(q) && !self.finals[q]
    }

    /// Explicit transitions as `(left, right, guard, target)`.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, StateId, Guard, StateId)> + '_ {
        self.rules
            .iter()
            .flat_map(|(&(l, r), es)| es.iter().map(move |&(g, t)| (l, r, g, t)))
    }

    pub fn transitions_for(&self, left: StateId, right: StateId) -> &[(Guard, StateId)] {
        self.rules.get(&(left, right)).map_or(&[], Vec::as_slice)
    }

    pub fn num_transitions(&self) -> usize {
        self.rules.values().map(Vec::len).sum()
    }

    /// Total successor function of a deterministic automaton at one child
    /// pair, with the implicit sink transitions made explicit.
    pub fn complete_partition(&self, left: StateId, right: StateId) -> Vec<(Guard, StateId)> {
        debug_assert!(self.deterministic);
        match self.sink {
            Some(s) if left == s || right == s => vec![(Guard::full(self.width), s)],
            Some(s) => partition::complete(self.width, self.transitions_for(left, right), s),
            None => self.transitions_for(left, right).to_vec(),
        }
    }

    /// Deterministic successor of one concrete symbol.
    pub fn step(&self, left: StateId, right: StateId, sym: BitString) -> StateId {
        debug_assert!(self.deterministic);
        if let Some(s) = self.sink {
            if left == s || right == s {
                return s;
            }
        }
        self.transitions_for(left, right)
            .iter()
            .find(|(g, _)| g.matches(sym))
            .map(|&(_, t)| t)
            .or(self.sink)
            .expect("deterministic automaton without a sink is total")
    }

    /// Nondeterministic successors of one concrete symbol.
    pub fn successors(&self, left: StateId, right: StateId, sym: BitString) -> BTreeSet<StateId> {
        if self.deterministic {
            return BTreeSet::from([self.step(left, right, sym)]);
        }
        self.transitions_for(left, right)
            .iter()
            .filter(|(g, _)| g.matches(sym))
            .map(|&(_, t)| t)
            .collect()
    }

    /// States reached at the root of `tree`.
    pub fn run(&self, tree: &LabeledTree) -> Result<BTreeSet<StateId>> {
        if !tree.check_width(self.width) {
            return Err(AutomatonError::WidthMismatch {
                expected: self.width,
                found: tree.width().unwrap_or(0),
            });
        }
        Ok(self.run_unchecked(tree))
    }

    fn run_unchecked(&self, tree: &LabeledTree) -> BTreeSet<StateId> {
        if self.deterministic {
            return BTreeSet::from([self.run_det(tree)]);
        }
        match tree {
            LabeledTree::Empty => BTreeSet::from([self.initial]),
            LabeledTree::Node(n) => {
                let ls = self.run_unchecked(&n.left);
                let rs = self.run_unchecked(&n.right);
                let mut out = BTreeSet::new();
                for &l in &ls {
                    for &r in &rs {
                        out.extend(self.successors(l, r, n.label));
                    }
                }
                out
            }
        }
    }

    fn run_det(&self, tree: &LabeledTree) -> StateId {
        match tree {
            LabeledTree::Empty => self.initial,
            LabeledTree::Node(n) => {
                let l = self.run_det(&n.left);
                let r = self.run_det(&n.right);
                self.step(l, r, n.label)
            }
        }
    }

    /// Membership: is some state reached at the root final?
    pub fn run_membership(&self, tree: &LabeledTree) -> Result<bool> {
        Ok(self.run(tree)?.iter().any(|&q| self.finals[q]))
    }

    /// Membership for a batch of trees, evaluated in parallel.
    pub fn accepts_batch(&self, trees: &[LabeledTree]) -> Result<Vec<bool>> {
        if let Some(t) = trees.iter().find(|t| !t.check_width(self.width)) {
            return Err(AutomatonError::WidthMismatch {
                expected: self.width,
                found: t.width().unwrap_or(0),
            });
        }
        Ok(crate::par::map(trees, |t| {
            self.run_unchecked(t).iter().any(|&q| self.finals[q])
        }))
    }

    fn same_width(&self, other: &TreeAutomaton) -> Result<()> {
        if self.width != other.width {
            return Err(AutomatonError::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        Ok(())
    }

    /// Same transitions, finals flipped. The sink stays designated as the
    /// absorbing target of unlisted transitions, so after complementing it
    /// may be final.
    pub fn complement(&self) -> Result<TreeAutomaton> {
        if !self.deterministic {
            return Err(AutomatonError::NotDeterministic);
        }
        let mut out = self.clone();
        for f in &mut out.finals {
            *f = !*f;
        }
        Ok(out)
    }

    /// Inserts a don't-care position at `pos`; the language becomes the
    /// inverse image under erasing that bit.
    pub fn cylindrify(&self, pos: usize) -> Result<TreeAutomaton> {
        if pos > self.width {
            return Err(AutomatonError::PositionOutOfRange { pos, width: self.width });
        }
        if self.width + 1 > MAX_WIDTH {
            return Err(AutomatonError::WidthTooLarge(self.width + 1));
        }
        let mut out = self.clone();
        out.width += 1;
        for entries in out.rules.values_mut() {
            for (g, _) in entries.iter_mut() {
                *g = g.insert_dont_care(pos);
            }
        }
        Ok(out)
    }

    /// Erases bit `pos` from every guard. The result is nondeterministic in
    /// general; its language is the image of this one under erasing the bit.
    pub fn project(&self, pos: usize) -> Result<TreeAutomaton> {
        if pos >= self.width {
            return Err(AutomatonError::PositionOutOfRange { pos, width: self.width });
        }
        let rules = self.nondeterministic_rules();
        let projected = rules
            .into_iter()
            .map(|(k, es)| (k, es.into_iter().map(|(g, t)| (g.erase(pos), t)).collect()))
            .collect();
        Ok(TreeAutomaton::from_raw(
            self.width - 1,
            self.num_states,
            self.initial,
            self.finals.clone(),
            None,
            false,
            projected,
        ))
    }

    /// Transition table with the same language in nondeterministic reading
    /// (uncovered symbols have no successor). Transitions into a dead sink
    /// are dropped; an accepting sink is materialized for every pair.
    pub(crate) fn nondeterministic_rules(&self) -> Rules {
        if !self.deterministic {
            return self.rules.clone();
        }
        match self.sink {
            Some(s) if self.finals[s] => {
                let mut out = Rules::new();
                for l in 0..self.num_states {
                    for r in 0..self.num_states {
                        out.insert((l, r), self.complete_partition(l, r));
                    }
                }
                out
            }
            _ => self.rules.clone(),
        }
    }

    /// `T(self) = T(other)`, decided by emptiness of both differences.
    pub fn equivalent(&self, other: &TreeAutomaton) -> Result<bool> {
        self.same_width(other)?;
        let a = self.determinize_if_needed();
        let b = other.determinize_if_needed();
        Ok(a.intersect(&b.complement()?)?.is_empty() && b.intersect(&a.complement()?)?.is_empty())
    }

    /// `T(self) ⊆ T(other)`.
    pub fn is_subset_of(&self, other: &TreeAutomaton) -> Result<bool> {
        self.same_width(other)?;
        let a = self.determinize_if_needed();
        let b = other.determinize_if_needed();
        Ok(a.intersect(&b.complement()?)?.is_empty())
    }

    pub(crate) fn determinize_if_needed(&self) -> TreeAutomaton {
        if self.deterministic {
            self.clone()
        } else {
            self.determinize()
        }
    }

    /// Both emptiness detectors: reachability of a final state, and the
    /// shape of the minimal automaton (one non-final state). Returns `None`
    /// if they disagree, which would indicate a bug.
    pub fn emptiness_cross_check(&self) -> Option<bool> {
        let by_reach = self.is_empty();
        let m = self.minimal();
        let by_shape = m.num_states() == 1 && !m.is_final(m.initial());
        (by_reach == by_shape).then_some(by_reach)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub(crate) fn g(s: &str) -> Guard {
        Guard::parse(s).unwrap()
    }

    /// The six-state asymmetric c-command automaton over bits (x, y).
    pub(crate) fn ac_com() -> TreeAutomaton {
        let rules = [
            (0, 0, "00", 0),
            (0, 0, "10", 3),
            (0, 0, "01", 1),
            (0, 1, "00", 2),
            (0, 2, "00", 2),
            (0, 4, "00", 4),
            (1, 0, "00", 2),
            (2, 0, "00", 2),
            (3, 2, "00", 4),
            (4, 0, "00", 4),
        ];
        TreeAutomaton::from_parts(
            2,
            6,
            0,
            [4],
            Some(5),
            true,
            rules.iter().map(|&(l, r, s, t)| (l, r, g(s), t)),
        )
        .unwrap()
    }

    pub(crate) fn tree(s: &str) -> LabeledTree {
        LabeledTree::parse(s).unwrap()
    }

    pub(crate) const ACCEPTED: &str = "(00 (10 () ()) (00 (01 () ()) ()))";
    pub(crate) const SIBLINGS: &str = "(00 (10 () ()) (01 () ()))";
}
