//! Per-method recommendation trees.
//!
//! Each proof method gets its own complete height-2 regression tree trained
//! one-vs-rest on (feature vector, chosen method) pairs. A tree's four leaves
//! hold the empirical rate at which the method was chosen for obligations
//! routed there; the collection of trees ([`TreeBank`]) fixes the leaf
//! indexing used by genomes in [`crate::evolve`].

mod codec;
mod train;
mod tree;

pub use codec::{parse_bank, parse_tree, serialize_tree, write_bank};
pub use train::{extract_datapoints, train_bank, train_tree, DataPoint};
pub use tree::{eval_tree, Branch, MethodTree, TreeBank};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecommendError {
    #[error("feature vector too short: tree needs {needed} assertion(s), vector has {got}")]
    ConfigMismatch { needed: usize, got: usize },
    #[error("no training points for method `{0}`")]
    EmptyTrainingSet(String),
    #[error("tree parse error at position {position}: {msg}")]
    Parse { position: usize, msg: String },
    #[error("tree bank line {line}: {msg}")]
    BankLine { line: usize, msg: String },
    #[error("duplicate method `{0}` in tree bank")]
    DuplicateMethod(String),
}
