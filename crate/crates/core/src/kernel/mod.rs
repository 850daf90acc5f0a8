//! Object logic and proof methods.
//!
//! Many-sorted equational logic over inductive datatypes. Goals are equations
//! with oriented hypotheses; methods (`refl`, `simp`, `auto`, `hyp`, `induct`,
//! `cases`) are deterministic and return at most one successor state.

mod goal;
mod method;
mod rewrite;
mod term;
mod theory;

pub use goal::{Goal, ProofState};
pub use method::{apply_method, replay, MethodInstance, MethodName};
pub use rewrite::{normalize, normalize_with, Normalized, RuleBook, DEFAULT_STEP_CAP};
pub use term::{match_term, replace_var, substitute, sym, Binding, Sym, Term};
pub use theory::{Constructor, Datatype, Function, RewriteRule, RuleKind, Theory};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("ill-typed substitution: {var} has type {expected}, bound to a {found}")]
    IllTypedSubstitution { var: String, expected: String, found: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("`{symbol}` expects {expected} argument(s), got {found}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("type mismatch in `{context}`: expected {expected}, found {found}")]
    TypeMismatch { context: String, expected: String, found: String },
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("bad rule: {0}")]
    BadRule(String),
    #[error("bad method instance: {0}")]
    BadMethodInstance(String),
    #[error("{0}")]
    IllFormed(String),
}
