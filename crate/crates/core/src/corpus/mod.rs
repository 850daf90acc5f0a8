//! Theory and conjecture files, random conjecture generation and oracle
//! labelling of conjectures with a first proof method.

mod conjecture;
mod generate;
mod label;
mod syntax;
mod theory_file;

pub use conjecture::{parse_conjectures, write_conjectures, Conjecture};
pub use generate::{generate_conjectures, ground_instances, GenParams};
pub use label::{finishing_strategy, label_conjecture, label_corpus, parse_labels, write_labels, Label, Labelling};
pub use syntax::parse_term_in;
pub use theory_file::{default_theory, default_theory_text, parse_theory};

use crate::kernel::KernelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Type { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Kernel { line: usize, source: KernelError },
    #[error("line {line}: unbound variable `{name}`")]
    UnboundVariable { line: usize, name: String },
    #[error("line {line}: duplicate name `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("conjecture {id}: {msg}")]
    Conjecture { id: String, msg: String },
    #[error("label file line {line}: {msg}")]
    Label { line: usize, msg: String },
    #[error("generation failed: {0}")]
    Generation(String),
}
