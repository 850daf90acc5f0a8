//! Strategy language: combinators over proof methods, a parser for their
//! concrete syntax and a depth-first interpreter with a method-application
//! budget.

mod ast;
mod library;
mod parse;
mod search;

pub use ast::StrategyExpr;
pub use library::{parse_library, StrategyLibrary};
pub use parse::parse_strategy;
pub use search::{instantiate_dynamic, run_strategy, run_strategy_capped, Outcome, RunResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("syntax error at position {position}: {msg}")]
    Syntax { position: usize, msg: String },
    #[error("unknown method `{name}` at position {position}")]
    UnknownMethod { position: usize, name: String },
    #[error("`{name}` at position {position} cannot be instantiated dynamically")]
    NotDynamic { position: usize, name: String },
    #[error("duplicate strategy name `{0}`")]
    DuplicateName(String),
    #[error("line {line}: {source}")]
    Line { line: usize, source: Box<StrategyError> },
}
