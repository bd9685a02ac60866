//! Cycle search over the possibility tree: a node and one of its ancestors
//! lie on a cycle exactly when some pair of local indices `x, y` gives them
//! equal value and equal seed. That is a 2x2 linear system with determinant
//! `a1*alpha2 - a2*alpha1`, solved here in exact integers and cross-checked
//! against the trajectory oracle.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::indexing::OperatorWord;
use crate::oracle::{run, StepVariant};
use crate::tree::{Tree, TreeNode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("scan depth {requested} exceeds the built tree depth {built}")]
    DepthLimitExceeded { requested: u32, built: u32 },
    #[error("ancestor word {ancestor:?} is not a prefix of descendant word {descendant:?}")]
    NotAncestor {
        descendant: String,
        ancestor: String,
    },
    #[error("cycle length must be at least 1")]
    ZeroCycleLength,
}

/// The numbers a pair needs from a node: progression and index map
/// components plus word and depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRef {
    pub depth: u32,
    pub word: OperatorWord,
    pub a: BigUint,
    pub b: BigUint,
    pub alpha: BigUint,
    pub beta: BigUint,
}

impl From<&TreeNode> for NodeRef {
    fn from(node: &TreeNode) -> NodeRef {
        NodeRef {
            depth: node.depth,
            word: node.word.clone(),
            a: node.progression.a().clone(),
            b: node.progression.b().clone(),
            alpha: node.index_map.alpha().clone(),
            beta: node.index_map.beta().clone(),
        }
    }
}

/// A descendant node paired with a strictly shallower node, `t` compact
/// steps apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclePair {
    descendant: NodeRef,
    ancestor: NodeRef,
}

impl CyclePair {
    /// Pairs a node with an ancestor on its root path.
    pub fn new(descendant: NodeRef, ancestor: NodeRef) -> Result<CyclePair, CycleError> {
        let prefix_len = ancestor.word.len();
        if descendant.word.operators().get(..prefix_len) != Some(ancestor.word.operators()) {
            return Err(CycleError::NotAncestor {
                descendant: descendant.word.to_string(),
                ancestor: ancestor.word.to_string(),
            });
        }
        CyclePair::cross(descendant, ancestor)
    }

    /// Pairs any two nodes at different depths, without requiring ancestry.
    /// Used by the all-pairs sanity mode and by hand-built test pairs.
    pub fn cross(descendant: NodeRef, ancestor: NodeRef) -> Result<CyclePair, CycleError> {
        if descendant.depth <= ancestor.depth {
            return Err(CycleError::ZeroCycleLength);
        }
        Ok(CyclePair {
            descendant,
            ancestor,
        })
    }

    pub fn descendant(&self) -> &NodeRef {
        &self.descendant
    }

    pub fn ancestor(&self) -> &NodeRef {
        &self.ancestor
    }

    /// Cycle length in compact steps.
    pub fn t(&self) -> u32 {
        self.descendant.depth - self.ancestor.depth
    }
}

/// Outcome of the exact linear solve for one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// The system has exactly one solution and it is a pair of nonnegative
    /// integers.
    Unique { x: BigUint, y: BigUint },
    /// The system is regular but its solution is fractional or negative.
    NoSolution,
    /// The determinant vanishes; the system is dependent or inconsistent.
    Degenerate,
}

fn signed(n: &BigUint) -> BigInt {
    BigInt::from(n.clone())
}

/// Solves the equal-value/equal-seed system for a pair:
/// `a1*x + b1 = a2*y + b2` and `alpha1*x + beta1 = alpha2*y + beta2`,
/// by the explicit formula with determinant `a1*alpha2 - a2*alpha1`.
pub fn solve_pair(pair: &CyclePair) -> SolveOutcome {
    let d = pair.descendant();
    let n = pair.ancestor();
    let (a1, b1, al1, be1) = (signed(&d.a), signed(&d.b), signed(&d.alpha), signed(&d.beta));
    let (a2, b2, al2, be2) = (signed(&n.a), signed(&n.b), signed(&n.alpha), signed(&n.beta));

    let det = &a1 * &al2 - &a2 * &al1;
    if det.is_zero() {
        return SolveOutcome::Degenerate;
    }

    let beta_diff = &be1 - &be2;
    let b_diff = &b2 - &b1;
    let x_num = &a2 * &beta_diff + &al2 * &b_diff;
    let y_num = &a1 * &beta_diff + &al1 * &b_diff;

    let (x, x_rem) = x_num.div_rem(&det);
    let (y, y_rem) = y_num.div_rem(&det);
    if !x_rem.is_zero() || !y_rem.is_zero() || x.is_negative() || y.is_negative() {
        return SolveOutcome::NoSolution;
    }

    debug_assert_eq!(&a1 * &x + &b1, &a2 * &y + &b2);
    debug_assert_eq!(&al1 * &x + &be1, &al2 * &y + &be2);

    SolveOutcome::Unique {
        x: x.to_biguint().expect("checked nonnegative"),
        y: y.to_biguint().expect("checked nonnegative"),
    }
}

/// Fallback for degenerate pairs: search `x` in `[0, bound]`, derive `y`
/// from the value equation, and accept the first `x` whose `y` is a
/// nonnegative integer also satisfying the seed equation.
pub fn solve_degenerate_bounded(pair: &CyclePair, bound: u64) -> Option<(BigUint, BigUint)> {
    let d = pair.descendant();
    let n = pair.ancestor();
    for x in 0..=bound {
        let x = BigUint::from(x);
        let value = &d.a * &x + &d.b;
        if value < n.b {
            continue;
        }
        let (y, rem) = (&value - &n.b).div_rem(&n.a);
        if !rem.is_zero() {
            continue;
        }
        if &d.alpha * &x + &d.beta == &n.alpha * &y + &n.beta {
            return Some((x, y));
        }
    }
    None
}

/// A solved and oracle-checked cycle condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSolution {
    pub pair: CyclePair,
    pub x: BigUint,
    pub y: BigUint,
    /// Common node value `a1*x + b1`.
    pub value: BigUint,
    /// Common seed `alpha1*x + beta1`.
    pub seed: BigUint,
    /// Whether the compact trajectory from the seed repeats the value at
    /// steps `depth - t` and `depth`.
    pub verified: bool,
}

impl CycleSolution {
    pub fn t(&self) -> u32 {
        self.pair.t()
    }
}

/// Which node pairs a scan considers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// Each node against the ancestors on its root path (the cycle
    /// condition proper).
    #[default]
    AncestorsOnly,
    /// Each node against every strictly shallower node. Cross-branch pairs
    /// can never share a seed, so this must find exactly the ancestor
    /// solutions; kept as a testable sanity mode.
    AllPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub mode: ScanMode,
    /// Search bound on `x` for degenerate pairs.
    pub fallback_bound: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            mode: ScanMode::AncestorsOnly,
            fallback_bound: 1_000_000,
        }
    }
}

/// Scans every pair up to `max_depth`, solves each, drops seed-0 artifacts
/// (the all-`T1` path pairs, whose common "cycle" is the empty trajectory
/// the oracle rejects), verifies the rest against the oracle, and returns
/// the solutions sorted by descendant (depth, word) then `t`.
pub fn scan(
    tree: &Tree,
    max_depth: u32,
    options: &ScanOptions,
) -> Result<Vec<CycleSolution>, CycleError> {
    if tree.depth() < max_depth {
        return Err(CycleError::DepthLimitExceeded {
            requested: max_depth,
            built: tree.depth(),
        });
    }
    let descendants: Vec<&TreeNode> = tree
        .nodes()
        .iter()
        .filter(|n| n.depth >= 1 && n.depth <= max_depth)
        .collect();

    let mut solutions: Vec<CycleSolution> = descendants
        .par_iter()
        .flat_map_iter(|node| pairs_for_node(tree, node, options))
        .filter_map(|pair| solve_and_verify(pair, options.fallback_bound))
        .collect();

    solutions.sort_by_key(|s| {
        (
            s.pair.descendant().depth,
            s.pair.descendant().word.to_string(),
            s.t(),
            s.pair.ancestor().word.to_string(),
        )
    });
    Ok(solutions)
}

fn pairs_for_node<'t>(
    tree: &'t Tree,
    node: &'t TreeNode,
    options: &ScanOptions,
) -> Vec<CyclePair> {
    let descendant = NodeRef::from(node);
    let mut pairs = Vec::new();
    match options.mode {
        ScanMode::AncestorsOnly => {
            let mut cur = node;
            while let Some(parent) = tree.parent(cur.id) {
                pairs.push(
                    CyclePair::new(descendant.clone(), NodeRef::from(parent))
                        .expect("parent chain nodes are ancestors"),
                );
                cur = parent;
            }
        }
        ScanMode::AllPairs => {
            for d in (0..node.depth).rev() {
                for other in tree.nodes_at_depth(d) {
                    pairs.push(
                        CyclePair::cross(descendant.clone(), NodeRef::from(other))
                            .expect("strictly shallower"),
                    );
                }
            }
        }
    }
    pairs
}

fn solve_and_verify(pair: CyclePair, fallback_bound: u64) -> Option<CycleSolution> {
    let (x, y) = match solve_pair(&pair) {
        SolveOutcome::Unique { x, y } => (x, y),
        SolveOutcome::Degenerate => solve_degenerate_bounded(&pair, fallback_bound)?,
        SolveOutcome::NoSolution => return None,
    };

    let d = pair.descendant();
    let seed = &d.alpha * &x + &d.beta;
    if seed.is_zero() {
        // Only the all-T1 pairs land here (x = 0, beta = 0); there is no
        // trajectory with seed 0 to witness a cycle.
        return None;
    }
    let value = &d.a * &x + &d.b;

    let depth = d.depth as usize;
    let t = pair.t() as usize;
    let trajectory =
        run(seed.clone(), depth, StepVariant::Compact).expect("seed checked nonzero");
    let verified = trajectory.values()[depth - t] == trajectory.values()[depth];

    Some(CycleSolution {
        pair,
        x,
        y,
        value,
        seed,
        verified,
    })
}

/// Flat record for the JSON export schema.
#[derive(Debug, Serialize)]
pub struct SolutionRecord {
    pub descendant_word: String,
    pub ancestor_word: String,
    pub t: u32,
    pub x: String,
    pub y: String,
    pub value: String,
    pub seed: String,
    pub verified: bool,
}

impl From<&CycleSolution> for SolutionRecord {
    fn from(s: &CycleSolution) -> SolutionRecord {
        SolutionRecord {
            descendant_word: s.pair.descendant().word.to_string(),
            ancestor_word: s.pair.ancestor().word.to_string(),
            t: s.t(),
            x: s.x.to_string(),
            y: s.y.to_string(),
            value: s.value.to_string(),
            seed: s.seed.to_string(),
            verified: s.verified,
        }
    }
}

pub fn solutions_to_json(solutions: &[CycleSolution]) -> String {
    let records: Vec<SolutionRecord> = solutions.iter().map(SolutionRecord::from).collect();
    serde_json::to_string(&records).expect("solution records always serialize")
}
