//! Shared test helpers: a brute-force semantic evaluator for formulas,
//! exhaustive tree enumeration, and random automata.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use msotree::automaton::{BitString, Guard};
use msotree::logic::{AtomKind, Formula, Sort, VarTable};
use msotree::{LabeledTree, TreeAutomaton};
use rayon::prelude::*;

type Node = Vec<bool>;

#[derive(Clone, Debug)]
enum Val {
    Node(Node),
    Set(BTreeSet<Node>),
}

/// How far quantifiers look beyond the labeled tree.
///
/// A finite tree stands for the infinite labeling that is zero outside it.
/// First-order quantifiers range over the tree's nodes plus, below every
/// empty child slot `a`, the nodes `a·s` with `|s| < margin`, plus the
/// children of nodes already bound to first-order variables.
/// Second-order quantifiers range over subsets of the tree's nodes plus
/// the slots `a·s` with `|s| < set_margin`, plus whatever nodes are bound
/// to first-order variables at that point. Subsets of the full first-order
/// domain would be exponential in its size (23 nodes for a 5-node tree at
/// margin 2), so set quantification uses a smaller margin.
#[derive(Clone, Copy, Debug)]
pub struct Margins {
    pub margin: usize,
    pub set_margin: usize,
}

impl Default for Margins {
    fn default() -> Self {
        Margins { margin: 2, set_margin: 1 }
    }
}

fn domain(t: &LabeledTree, margin: usize) -> Vec<Node> {
    let mut nodes = Vec::new();
    let mut slots = Vec::new();
    fn go(t: &LabeledTree, addr: &mut Node, nodes: &mut Vec<Node>, slots: &mut Vec<Node>) {
        match t {
            LabeledTree::Empty => slots.push(addr.clone()),
            LabeledTree::Node(n) => {
                nodes.push(addr.clone());
                addr.push(false);
                go(&n.left, addr, nodes, slots);
                addr.pop();
                addr.push(true);
                go(&n.right, addr, nodes, slots);
                addr.pop();
            }
        }
    }
    go(t, &mut Vec::new(), &mut nodes, &mut slots);
    for slot in slots {
        let mut layer = vec![slot];
        for _ in 0..margin {
            let mut next = Vec::new();
            for a in &layer {
                nodes.push(a.clone());
                for b in [false, true] {
                    let mut c = a.clone();
                    c.push(b);
                    next.push(c);
                }
            }
            layer = next;
        }
    }
    nodes
}

fn is_prefix(a: &Node, b: &Node) -> bool {
    a.len() <= b.len() && b[..a.len()] == a[..]
}

fn precedes(a: &Node, b: &Node) -> bool {
    match a.iter().zip(b).position(|(x, y)| x != y) {
        Some(i) => !a[i] && b[i],
        None => false,
    }
}

struct Eval {
    nodes: Vec<Node>,
    set_nodes: Vec<Node>,
}

impl Eval {
    fn node<'e>(env: &'e HashMap<String, Val>, v: &str) -> &'e Node {
        match &env[v] {
            Val::Node(n) => n,
            Val::Set(_) => panic!("`{v}` is not first-order"),
        }
    }

    fn set<'e>(env: &'e HashMap<String, Val>, v: &str) -> &'e BTreeSet<Node> {
        match &env[v] {
            Val::Set(s) => s,
            Val::Node(_) => panic!("`{v}` is not second-order"),
        }
    }

    fn atom(&self, kind: AtomKind, args: &[String], env: &HashMap<String, Val>) -> bool {
        let n = |i: usize| Self::node(env, &args[i]);
        let s = |i: usize| Self::set(env, &args[i]);
        match kind {
            AtomKind::Sing => s(0).len() == 1,
            AtomKind::In => s(1).contains(n(0)),
            AtomKind::Sub => s(0).is_subset(s(1)),
            AtomKind::EqSet => s(0) == s(1),
            AtomKind::Eq1 => n(0) == n(1),
            AtomKind::PDom => n(0).len() < n(1).len() && is_prefix(n(0), n(1)),
            AtomKind::RDom => is_prefix(n(0), n(1)),
            AtomKind::IDom => n(0).len() + 1 == n(1).len() && is_prefix(n(0), n(1)),
            AtomKind::Prec => precedes(n(0), n(1)),
        }
    }

    fn holds(&self, f: &Formula, env: &mut HashMap<String, Val>) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(kind, args) => self.atom(*kind, args, env),
            Formula::Not(g) => !self.holds(g, env),
            Formula::And(g, h) => self.holds(g, env) && self.holds(h, env),
            Formula::Or(g, h) => self.holds(g, env) || self.holds(h, env),
            Formula::Implies(g, h) => !self.holds(g, env) || self.holds(h, env),
            Formula::Iff(g, h) => self.holds(g, env) == self.holds(h, env),
            Formula::Exists1(v, g) => self.over_nodes(v, g, env, true),
            Formula::Forall1(v, g) => !self.over_nodes(v, g, env, false),
            Formula::Exists2(v, g) => self.over_sets(v, g, env, true),
            Formula::Forall2(v, g) => !self.over_sets(v, g, env, false),
            Formula::Call(name, _) => panic!("unexpanded call `{name}`"),
        }
    }

    /// Whether some node makes `g` evaluate to `want`.
    fn over_nodes(&self, v: &str, g: &Formula, env: &mut HashMap<String, Val>, want: bool) -> bool {
        let saved = env.remove(v);
        // Below the tree every subtree looks the same, so the children of a
        // bound node at the edge of the margin stand in for the infinite
        // region beneath it.
        let mut universe = self.nodes.clone();
        for val in env.values() {
            if let Val::Node(n) = val {
                for b in [false, true] {
                    let mut c = n.clone();
                    c.push(b);
                    if !universe.contains(&c) {
                        universe.push(c);
                    }
                }
            }
        }
        let found = universe.iter().any(|n| {
            env.insert(v.to_string(), Val::Node(n.clone()));
            self.holds(g, env) == want
        });
        restore(env, v, saved);
        found
    }

    fn over_sets(&self, v: &str, g: &Formula, env: &mut HashMap<String, Val>, want: bool) -> bool {
        let saved = env.remove(v);
        // Nodes already bound to first-order variables may lie deeper in
        // the margin than the set domain reaches; sets may contain them too.
        let mut universe = self.set_nodes.clone();
        for val in env.values() {
            if let Val::Node(n) = val {
                if !universe.contains(n) {
                    universe.push(n.clone());
                }
            }
        }
        let k = universe.len();
        assert!(k <= 20, "set quantifier domain too large ({k} nodes)");
        let found = (0..1u32 << k).any(|mask| {
            let s = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| universe[i].clone()).collect();
            env.insert(v.to_string(), Val::Set(s));
            self.holds(g, env) == want
        });
        restore(env, v, saved);
        found
    }
}

fn restore(env: &mut HashMap<String, Val>, v: &str, saved: Option<Val>) {
    match saved {
        Some(old) => env.insert(v.to_string(), old),
        None => env.remove(v),
    };
}

/// Whether the assignment encoded by `t` over `table` satisfies `f`.
/// A first-order variable whose bit is not set at exactly one node makes
/// the encoding invalid, and the answer false.
pub fn holds(f: &Formula, table: &VarTable, t: &LabeledTree, margins: Margins) -> bool {
    let mut env = HashMap::new();
    for (i, e) in table.entries().iter().enumerate() {
        let nodes: Vec<Node> = t.nodes_with_bit(i).into_iter().map(|a| a.0).collect();
        let val = match e.sort {
            Sort::First if nodes.len() == 1 => Val::Node(nodes[0].clone()),
            Sort::First => return false,
            Sort::Second => Val::Set(nodes.into_iter().collect()),
        };
        env.insert(e.name.clone(), val);
    }
    let ev = Eval {
        nodes: domain(t, margins.margin),
        set_nodes: domain(t, margins.set_margin),
    };
    ev.holds(f, &mut env)
}

/// Unlabeled tree shapes with exactly `n` nodes.
fn shapes(n: usize) -> Vec<LabeledTree> {
    let mut by_size: Vec<Vec<LabeledTree>> = vec![vec![LabeledTree::Empty]];
    for k in 1..=n {
        let mut level = Vec::new();
        for l in 0..k {
            for a in &by_size[l] {
                for b in &by_size[k - 1 - l] {
                    level.push(LabeledTree::node(BitString::zero(0), a.clone(), b.clone()));
                }
            }
        }
        by_size.push(level);
    }
    by_size.swap_remove(n)
}

fn relabel(shape: &LabeledTree, width: usize, code: &mut u64) -> LabeledTree {
    match shape {
        LabeledTree::Empty => LabeledTree::Empty,
        LabeledTree::Node(n) => {
            let label = BitString::new(*code & ((1 << width) - 1), width);
            *code >>= width;
            let l = relabel(&n.left, width, code);
            let r = relabel(&n.right, width, code);
            LabeledTree::node(label, l, r)
        }
    }
}

/// Runs `check` on every tree of at most `max_nodes` nodes with `width`-bit
/// labels, in parallel, and returns a tree on which it failed.
pub fn find_counterexample(
    width: usize,
    max_nodes: usize,
    check: impl Fn(&LabeledTree) -> bool + Sync,
) -> Option<LabeledTree> {
    (0..=max_nodes).find_map(|n| {
        shapes(n).into_par_iter().find_map_any(|shape| {
            (0..1u64 << (width * n)).into_par_iter().find_map_any(|code| {
                let t = relabel(&shape, width, &mut { code });
                (!check(&t)).then_some(t)
            })
        })
    })
}

/// Number of trees visited by [`find_counterexample`].
pub fn tree_count(width: usize, max_nodes: usize) -> usize {
    (0..=max_nodes).map(|n| shapes(n).len() << (width * n)).sum()
}

/// A deterministic automaton with states `0..n` plus the sink `n`, where
/// `targets` lists, for each child pair and each symbol, a target in
/// `0..=n` (`n` meaning the sink).
pub fn det_from_table(width: usize, n: usize, finals: &[bool], targets: &[usize]) -> TreeAutomaton {
    let symbols = 1usize << width;
    assert_eq!(targets.len(), n * n * symbols);
    let mut rules = Vec::new();
    for l in 0..n {
        for r in 0..n {
            for s in 0..symbols {
                let t = targets[(l * n + r) * symbols + s];
                if t < n {
                    rules.push((l, r, Guard::symbol(BitString::new(s as u64, width)), t));
                }
            }
        }
    }
    let finals = (0..n).filter(|&q| finals[q]);
    TreeAutomaton::from_parts(width, n + 1, 0, finals, Some(n), true, rules).unwrap()
}

/// A nondeterministic automaton on states `0..n` from `(l, r, symbol, t)`
/// rules.
pub fn nfa_from_rules(width: usize, n: usize, finals: &[bool], rules: &[(usize, usize, u64, usize)]) -> TreeAutomaton {
    let rules = rules
        .iter()
        .map(|&(l, r, s, t)| (l % n, r % n, Guard::symbol(BitString::new(s % (1 << width), width)), t % n));
    let finals = (0..n).filter(|&q| finals[q % finals.len()]);
    TreeAutomaton::from_parts(width, n, 0, finals, None, false, rules).unwrap()
}

pub mod strategies {
    use super::*;
    use msotree::logic::Quantifier::{Exists, Forall};
    use proptest::prelude::*;

    /// Deterministic automata with 1..=`max_states` live states.
    pub fn det_automaton(width: usize, max_states: usize) -> impl Strategy<Value = TreeAutomaton> {
        (1..=max_states).prop_flat_map(move |n| {
            let cells = (n * n) << width;
            (
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(0..=n, cells),
            )
                .prop_map(move |(finals, targets)| det_from_table(width, n, &finals, &targets))
        })
    }

    pub fn nfa(width: usize, max_states: usize) -> impl Strategy<Value = TreeAutomaton> {
        (1..=max_states).prop_flat_map(move |n| {
            (
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec((0..n, 0..n, any::<u64>(), 0..n), 0..3 * n * n),
            )
                .prop_map(move |(finals, rules)| nfa_from_rules(width, n, &finals, &rules))
        })
    }

    /// Formulas over the free variables `x`, `y`, `X` with at most
    /// `quantifiers` nested quantifiers, binding `z` or `Z`.
    pub fn formula(quantifiers: u32) -> BoxedStrategy<Formula> {
        let atoms = prop_oneof![
            Just(("prec", vec!["x", "y"])),
            Just(("pdom", vec!["x", "y"])),
            Just(("rdom", vec!["y", "x"])),
            Just(("idom", vec!["x", "y"])),
            Just(("eq1", vec!["x", "y"])),
            Just(("in", vec!["x", "X"])),
            Just(("in", vec!["y", "X"])),
            Just(("sing", vec!["X"])),
        ]
        .prop_map(|(name, args)| Formula::atom(AtomKind::from_name(name).unwrap(), &args));
        let leaf = prop_oneof![4 => atoms, 1 => Just(Formula::True), 1 => Just(Formula::False)];
        let boolean = leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
            ]
        });
        let mut f = boolean.boxed();
        for _ in 0..quantifiers {
            let inner = f.clone();
            f = prop_oneof![
                2 => inner.clone(),
                1 => (inner, prop::sample::select(vec![(Exists, "x"), (Forall, "y"), (Exists, "X"), (Forall, "X")]))
                    .prop_map(|(body, (q, v))| Formula::quantify(q, v, body)),
            ]
            .boxed();
        }
        f
    }
}

/// Law checks shared by the property tests and the acceptance run.
pub mod laws {
    use super::*;
    use msotree::compiler::{compile_formula, CompileOptions};
    use proptest::prelude::*;

    fn same(a: &TreeAutomaton, b: &TreeAutomaton, what: &str) -> Result<(), TestCaseError> {
        prop_assert!(a.equivalent(b).unwrap(), "{}", what);
        Ok(())
    }

    pub fn double_complement(a: &TreeAutomaton) -> Result<(), TestCaseError> {
        let cc = a.complement().unwrap().complement().unwrap();
        same(&cc, a, "~~A = A")
    }

    pub fn de_morgan(a: &TreeAutomaton, b: &TreeAutomaton) -> Result<(), TestCaseError> {
        let lhs = a.union(b).unwrap().complement().unwrap();
        let rhs = a.complement().unwrap().intersect(&b.complement().unwrap()).unwrap();
        same(&lhs, &rhs, "~(A | B) = ~A & ~B")?;
        let lhs = a.intersect(b).unwrap().complement().unwrap();
        let rhs = a.complement().unwrap().union(&b.complement().unwrap()).unwrap();
        same(&lhs, &rhs, "~(A & B) = ~A | ~B")
    }

    /// Projection undoes cylindrification at the same position.
    pub fn section(a: &TreeAutomaton, pos: usize) -> Result<(), TestCaseError> {
        let pos = pos % (a.width() + 1);
        let back = a.cylindrify(pos).unwrap().project(pos).unwrap();
        same(&back.minimal(), a, "project(cylindrify(A))")
    }

    /// Minimization preserves the language, checked by running the input
    /// directly on every tree with at most 3 nodes, and is idempotent.
    pub fn minimize(a: &TreeAutomaton) -> Result<(), TestCaseError> {
        let m = a.minimal();
        let mm = m.minimize().unwrap();
        prop_assert_eq!(mm.num_states(), m.num_states());
        prop_assert_eq!(&mm, &m);
        let bad = find_counterexample(a.width(), 3, |t| a.run_membership(t).unwrap() == m.run_membership(t).unwrap());
        prop_assert!(bad.is_none(), "minimal automaton differs on {}", bad.unwrap());
        if a.is_deterministic() {
            prop_assert!(m.num_states() <= a.num_states());
        }
        Ok(())
    }

    /// `all1 y. f` and `~ex1 y. ~f` compile to the same language, which
    /// agrees with the brute-force evaluator on small trees.
    pub fn forall_is_not_exists_not(body: &Formula) -> Result<(), TestCaseError> {
        let ambient = VarTable::from_names(["x", "y", "X"]).unwrap();
        let forall = Formula::Forall1("y".into(), Box::new(body.clone()));
        let dual = Formula::not(Formula::Exists1("y".into(), Box::new(Formula::not(body.clone()))));
        let opts = CompileOptions::default();
        let a = compile_formula(&forall, Some(&ambient), opts).unwrap();
        let b = compile_formula(&dual, Some(&ambient), opts).unwrap();
        prop_assert_eq!(&a.table, &b.table);
        same(&a.automaton, &b.automaton, "all1 = ~ex1~")?;
        let table = &a.table;
        let bad = find_counterexample(table.len(), 3, |t| {
            a.automaton.run_membership(t).unwrap() == holds(&forall, table, t, Margins::default())
        });
        prop_assert!(bad.is_none(), "{} disagrees with the evaluator on {}", forall, bad.unwrap());
        Ok(())
    }
}
