//! Symbolic engine for Collatz dynamics on arithmetic progressions.
//!
//! Every integer is encoded as a term of an arithmetic progression `S(a,b)`,
//! the sequence `a*i + b` over indices `i >= 0`. Two index operators,
//! `T1: S(a,b) -> S(2a,b)` and `T2: S(a,b) -> S(2a,a+b)`, split any
//! progression with odd difference into its even-valued and odd-valued
//! subsequences. Applying the compact Collatz step to each branch and
//! iterating builds the full possibility tree of the map, with an exact
//! affine index map back to the seed at every node.
//!
//! The crate keeps all arithmetic exact (`BigUint`/`BigInt` throughout) so
//! that symbolic claims can always be replayed against the concrete
//! trajectory oracle in [`oracle`].

pub mod cycles;
pub mod indexing;
pub mod invariants;
pub mod oracle;
pub mod progression;
pub mod tree;

pub use cycles::{scan, solve_pair, CycleError, CyclePair, CycleSolution, ScanMode, ScanOptions, SolveOutcome};
pub use indexing::{IndexMap, OperatorWord, WordParseError};
pub use invariants::{all_odd_path, lemma_step_check, min_seed_growth, AllOddReport, InvariantError};
pub use oracle::{run, step_compact, step_full, OracleError, StepVariant, Trajectory};
pub use progression::{Operator, ParityBranch, ParityClass, ParitySplit, Progression, ProgressionError};
pub use tree::{walk_word, word_from_branches, Branch, NodeId, Tree, TreeError, TreeNode};
