//! The symbolic Collatz possibility tree: a complete binary tree whose nodes
//! carry a progression, the composed index map back to the seed, the operator
//! word that reached them, and the parity branch that produced them.
//!
//! Nodes are stored breadth-first with the even child always preceding the
//! odd child, so node ids, iteration order, and exports are byte-stable.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::indexing::{IndexMap, OperatorWord};
use crate::progression::{Operator, Progression, ProgressionError};

/// Hard cap on tree depth unless explicitly overridden; 2^24 nodes of
/// symbolic state is around the memory ceiling of a desktop machine.
pub const DEFAULT_DEPTH_LIMIT: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("requested depth {requested} exceeds the limit {limit}")]
    DepthLimitExceeded { requested: u32, limit: u32 },
    #[error("no node with word {0:?} in the built tree")]
    WordNotFound(String),
    #[error(transparent)]
    Progression(#[from] ProgressionError),
}

/// Breadth-first node index; the root is 0, the children of node `i` are
/// `2i+1` (even) and `2i+2` (odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0
    }

    fn even_child(self) -> NodeId {
        NodeId(2 * self.0 + 1)
    }

    fn odd_child(self) -> NodeId {
        NodeId(2 * self.0 + 2)
    }

    fn parent(self) -> Option<NodeId> {
        if self.0 == 0 {
            None
        } else {
            Some(NodeId((self.0 - 1) / 2))
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which Collatz branch of the parent produced a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Even,
    Odd,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Even => "even",
            Branch::Odd => "odd",
        }
    }
}

/// One node of the possibility tree.
///
/// `word` records the `T1`/`T2` extractions from the root and drives the
/// seed formula; `branch` records the even/odd Collatz branch. The two
/// differ whenever the parent's offset `b` is odd, so both are kept.
/// `intermediate` is the post-extraction, pre-step progression (the parent's
/// split branch), retained for white-box checks; it is `None` at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub depth: u32,
    pub progression: Progression,
    pub index_map: IndexMap,
    pub word: OperatorWord,
    pub branch: Option<Branch>,
    pub intermediate: Option<Progression>,
}

impl TreeNode {
    /// The root: every seed, `S(1,0)`, identity index map, empty word.
    pub fn root() -> TreeNode {
        TreeNode {
            id: NodeId::ROOT,
            parent: None,
            depth: 0,
            progression: Progression::new(1u32, 0u32).expect("1 >= 1"),
            index_map: IndexMap::identity(),
            word: OperatorWord::empty(),
            branch: None,
            intermediate: None,
        }
    }

    /// Expands a node into its even and odd children: parity-split the
    /// progression, apply the matching Collatz step to each branch, and
    /// extend word and index map by the branch's operator.
    ///
    /// Every tree node has odd `a`, so the split cannot fail; an error here
    /// signals a hand-built node that violates that invariant.
    pub fn expand(&self) -> Result<(TreeNode, TreeNode), TreeError> {
        let split = self.progression.split_parity()?;

        let even_progression = split.even.progression.step_even()?;
        let odd_progression = split.odd.progression.step_odd_compact()?;

        let make_child = |id, branch, operator, intermediate, progression| TreeNode {
            id,
            parent: Some(self.id),
            depth: self.depth + 1,
            progression,
            index_map: self.index_map.compose(operator),
            word: self.word.extended(operator),
            branch: Some(branch),
            intermediate: Some(intermediate),
        };

        let even_child = make_child(
            self.id.even_child(),
            Branch::Even,
            split.even.operator,
            split.even.progression,
            even_progression,
        );
        let odd_child = make_child(
            self.id.odd_child(),
            Branch::Odd,
            split.odd.operator,
            split.odd.progression,
            odd_progression,
        );
        Ok((even_child, odd_child))
    }

    /// The branch (even/odd) that applying `op` at this node would take.
    /// For even `b` the even terms sit under `T1`; for odd `b` under `T2`.
    fn branch_for_operator(&self, op: Operator) -> Branch {
        let b_even = self.progression.b().is_even();
        match (op, b_even) {
            (Operator::T1, true) | (Operator::T2, false) => Branch::Even,
            (Operator::T1, false) | (Operator::T2, true) => Branch::Odd,
        }
    }
}

/// A complete binary possibility tree of a given depth, nodes in
/// breadth-first order.
#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<TreeNode>,
    depth: u32,
}

impl Tree {
    /// Builds the complete tree of the given depth under the default limit.
    pub fn build(depth: u32) -> Result<Tree, TreeError> {
        Tree::build_with_limit(depth, DEFAULT_DEPTH_LIMIT)
    }

    pub fn build_with_limit(depth: u32, limit: u32) -> Result<Tree, TreeError> {
        if depth > limit {
            return Err(TreeError::DepthLimitExceeded {
                requested: depth,
                limit,
            });
        }
        let node_count = (1usize << (depth + 1)) - 1;
        let mut nodes = Vec::with_capacity(node_count);
        nodes.push(TreeNode::root());
        let mut next = 0;
        while next < nodes.len() {
            if nodes[next].depth < depth {
                let (even, odd) = nodes[next].expand()?;
                debug_assert_eq!(even.id.index(), nodes.len());
                nodes.push(even);
                nodes.push(odd);
            }
            next += 1;
        }
        debug_assert_eq!(nodes.len(), node_count);
        Ok(Tree { nodes, depth })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> Option<&TreeNode> {
        self.nodes.get(id.index())
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    /// The even and odd children of a node, when it is not a leaf.
    pub fn children(&self, id: NodeId) -> Option<(NodeId, NodeId)> {
        let odd = id.odd_child();
        if odd.index() < self.nodes.len() {
            Some((id.even_child(), odd))
        } else {
            None
        }
    }

    pub fn parent(&self, id: NodeId) -> Option<&TreeNode> {
        id.parent().map(|pid| &self.nodes[pid.index()])
    }

    /// The `2^d` nodes at depth `d`, in breadth-first (even-before-odd) order.
    pub fn nodes_at_depth(&self, d: u32) -> &[TreeNode] {
        if d > self.depth {
            return &[];
        }
        let lo = (1usize << d) - 1;
        let hi = (1usize << (d + 1)) - 1;
        &self.nodes[lo..hi]
    }

    /// The unique node whose word equals the argument. Fails when the word
    /// is longer than the built depth.
    pub fn node_at(&self, word: &OperatorWord) -> Result<&TreeNode, TreeError> {
        let mut id = NodeId::ROOT;
        for &op in word.operators() {
            let node = &self.nodes[id.index()];
            id = match node.branch_for_operator(op) {
                Branch::Even => id.even_child(),
                Branch::Odd => id.odd_child(),
            };
            if id.index() >= self.nodes.len() {
                return Err(TreeError::WordNotFound(word.to_string()));
            }
        }
        Ok(&self.nodes[id.index()])
    }

    /// JSON export: an array of node records in breadth-first order, with
    /// all unbounded integers as decimal strings.
    pub fn to_json(&self) -> String {
        let records: Vec<NodeRecord> = self.nodes.iter().map(NodeRecord::from).collect();
        serde_json::to_string(&records).expect("node records always serialize")
    }

    /// DOT export: one vertex per node labeled with the progression, index
    /// map, and word; edges labeled with the producing branch.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph collatz_tree {\n");
        for node in &self.nodes {
            out.push_str(&format!(
                "  n{} [label=\"{}\\ni={}\\n{}\"];\n",
                node.id, node.progression, node.index_map, node.word
            ));
        }
        for node in &self.nodes {
            if let (Some(parent), Some(branch)) = (node.parent, node.branch) {
                out.push_str(&format!(
                    "  n{} -> n{} [label=\"{}\"];\n",
                    parent,
                    node.id,
                    branch.label()
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Flat node record for the JSON export schema.
#[derive(Debug, Serialize)]
pub struct NodeRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: u32,
    pub a: String,
    pub b: String,
    pub alpha: String,
    pub beta: String,
    pub word: String,
    pub branch: Option<&'static str>,
}

impl From<&TreeNode> for NodeRecord {
    fn from(node: &TreeNode) -> NodeRecord {
        NodeRecord {
            id: node.id.index(),
            parent: node.parent.map(NodeId::index),
            depth: node.depth,
            a: node.progression.a().to_string(),
            b: node.progression.b().to_string(),
            alpha: node.index_map.alpha().to_string(),
            beta: node.index_map.beta().to_string(),
            word: node.word.to_string(),
            branch: node.branch.map(Branch::label),
        }
    }
}

/// The node a word leads to, computed by walking a single root path without
/// materializing a tree. Usable for any word length.
pub fn walk_word(word: &OperatorWord) -> TreeNode {
    let mut node = TreeNode::root();
    for &op in word.operators() {
        let split = node
            .progression
            .split_parity()
            .expect("difference stays odd along every tree path");
        let (branch_side, branch) = if split.even.operator == op {
            (split.even, Branch::Even)
        } else {
            (split.odd, Branch::Odd)
        };
        let progression = match branch {
            Branch::Even => branch_side.progression.step_even(),
            Branch::Odd => branch_side.progression.step_odd_compact(),
        }
        .expect("split branches have uniform parity");
        node = TreeNode {
            id: match branch {
                Branch::Even => node.id.even_child(),
                Branch::Odd => node.id.odd_child(),
            },
            parent: Some(node.id),
            depth: node.depth + 1,
            progression,
            index_map: node.index_map.compose(op),
            word: node.word.extended(op),
            branch: Some(branch),
            intermediate: Some(branch_side.progression),
        };
    }
    node
}

/// Converts a sequence of even/odd branch choices into the operator word of
/// the path they select. The two differ at every node whose offset is odd.
pub fn word_from_branches(branches: &[Branch]) -> OperatorWord {
    let mut progression = Progression::new(1u32, 0u32).expect("1 >= 1");
    let mut ops = Vec::with_capacity(branches.len());
    for &branch in branches {
        let split = progression
            .split_parity()
            .expect("difference stays odd along every tree path");
        let side = match branch {
            Branch::Even => split.even,
            Branch::Odd => split.odd,
        };
        ops.push(side.operator);
        progression = match branch {
            Branch::Even => side.progression.step_even(),
            Branch::Odd => side.progression.step_odd_compact(),
        }
        .expect("split branches have uniform parity");
    }
    OperatorWord::new(ops)
}
