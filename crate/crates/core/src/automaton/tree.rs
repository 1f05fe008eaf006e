//! Finite binary trees with bit-string labels.

use std::cmp::Ordering;
use std::fmt;

use super::guard::BitString;

/// A node address: the path from the root, `false` for the left child and
/// `true` for the right child.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Address(pub Vec<bool>);

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    pub fn child(&self, right: bool) -> Self {
        let mut path = self.0.clone();
        path.push(right);
        Address(path)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Node {
    pub label: BitString,
    pub left: LabeledTree,
    pub right: LabeledTree,
}

/// Either the empty tree `()` or a labeled node with two subtrees.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub enum LabeledTree {
    #[default]
    Empty,
    Node(Box<Node>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("tree syntax error at offset {offset}: {msg}")]
pub struct TreeSyntaxError {
    pub offset: usize,
    pub msg: String,
}

impl LabeledTree {
    pub fn node(label: BitString, left: LabeledTree, right: LabeledTree) -> Self {
        LabeledTree::Node(Box::new(Node { label, left, right }))
    }

    pub fn leaf(label: BitString) -> Self {
        LabeledTree::node(label, LabeledTree::Empty, LabeledTree::Empty)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, LabeledTree::Empty)
    }

    /// Number of labeled nodes.
    pub fn size(&self) -> usize {
        match self {
            LabeledTree::Empty => 0,
            LabeledTree::Node(n) => 1 + n.left.size() + n.right.size(),
        }
    }

    /// Label width, or `None` for the empty tree. Mixed widths are reported
    /// by [`LabeledTree::check_width`].
    pub fn width(&self) -> Option<usize> {
        match self {
            LabeledTree::Empty => None,
            LabeledTree::Node(n) => Some(n.label.width()),
        }
    }

    /// True if every label has exactly `width` bits.
    pub fn check_width(&self, width: usize) -> bool {
        match self {
            LabeledTree::Empty => true,
            LabeledTree::Node(n) => {
                n.label.width() == width && n.left.check_width(width) && n.right.check_width(width)
            }
        }
    }

    /// Labels in preorder.
    pub fn preorder(&self) -> Vec<BitString> {
        let mut out = Vec::new();
        self.preorder_into(&mut out);
        out
    }

    fn preorder_into(&self, out: &mut Vec<BitString>) {
        if let LabeledTree::Node(n) = self {
            out.push(n.label);
            n.left.preorder_into(out);
            n.right.preorder_into(out);
        }
    }

    /// Visits every node with its address, in preorder.
    pub fn for_each_node(&self, mut f: impl FnMut(&Address, &Node)) {
        fn go(t: &LabeledTree, addr: &mut Vec<bool>, f: &mut dyn FnMut(&Address, &Node)) {
            if let LabeledTree::Node(n) = t {
                f(&Address(addr.clone()), n);
                addr.push(false);
                go(&n.left, addr, f);
                addr.pop();
                addr.push(true);
                go(&n.right, addr, f);
                addr.pop();
            }
        }
        go(self, &mut Vec::new(), &mut f);
    }

    /// Addresses of nodes whose label has bit `pos` set, in preorder.
    pub fn nodes_with_bit(&self, pos: usize) -> Vec<Address> {
        let mut out = Vec::new();
        self.for_each_node(|a, n| {
            if n.label.get(pos) {
                out.push(a.clone());
            }
        });
        out
    }

    /// Nodes without labeled children, left to right.
    pub fn frontier(&self) -> Vec<(Address, BitString)> {
        let mut out = Vec::new();
        self.for_each_node(|a, n| {
            if n.left.is_empty() && n.right.is_empty() {
                out.push((a.clone(), n.label));
            }
        });
        out
    }

    /// Order used to pick witnesses: fewer nodes first, then preorder label
    /// sequences compared lexicographically.
    pub fn witness_cmp(&self, other: &LabeledTree) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| {
            let a = self.preorder();
            let b = other.preorder();
            a.iter()
                .zip(&b)
                .map(|(x, y)| x.lex_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    pub fn parse(text: &str) -> Result<LabeledTree, TreeSyntaxError> {
        let mut p = TreeParser { src: text.as_bytes(), pos: 0 };
        let t = p.tree()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(t)
    }

    /// All trees with at most `max_nodes` nodes and labels of `width` bits,
    /// smallest first.
    pub fn enumerate(width: usize, max_nodes: usize) -> Vec<LabeledTree> {
        let mut by_size: Vec<Vec<LabeledTree>> = vec![vec![LabeledTree::Empty]];
        let labels: Vec<BitString> = (0..1u64 << width).map(|b| BitString::new(b, width)).collect();
        for n in 1..=max_nodes {
            let mut level = Vec::new();
            for left_size in 0..n {
                let right_size = n - 1 - left_size;
                for l in &by_size[left_size] {
                    for r in &by_size[right_size] {
                        for &label in &labels {
                            level.push(LabeledTree::node(label, l.clone(), r.clone()));
                        }
                    }
                }
            }
            by_size.push(level);
        }
        by_size.into_iter().flatten().collect()
    }
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabeledTree::Empty => f.write_str("()"),
            LabeledTree::Node(n) => {
                if n.label.width() == 0 {
                    write!(f, "({} {})", n.left, n.right)
                } else {
                    write!(f, "({} {} {})", n.label, n.left, n.right)
                }
            }
        }
    }
}

struct TreeParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TreeParser<'_> {
    fn err(&self, msg: &str) -> TreeSyntaxError {
        TreeSyntaxError {
            offset: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), TreeSyntaxError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn tree(&mut self) -> Result<LabeledTree, TreeSyntaxError> {
        self.expect(b'(')?;
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b')') {
            self.pos += 1;
            return Ok(LabeledTree::Empty);
        }
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(b'0') | Some(b'1')) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let label = BitString::parse(text).ok_or_else(|| self.err("label too wide"))?;
        let left = self.tree()?;
        let right = self.tree()?;
        self.expect(b')')?;
        if !left.check_width(label.width()) || !right.check_width(label.width()) {
            return Err(self.err("labels of differing widths"));
        }
        Ok(LabeledTree::node(label, left, right))
    }
}
