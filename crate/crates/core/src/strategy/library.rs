use std::fmt;

use super::ast::StrategyExpr;
use super::parse::parse_strategy;
use super::StrategyError;

const DEFAULT_LIBRARY: &str = include_str!("../../data/library.strat");

/// Named strategies in a fixed order. The order breaks ties during dispatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyLibrary {
    entries: Vec<(String, StrategyExpr)>,
}

impl StrategyLibrary {
    pub fn new(entries: Vec<(String, StrategyExpr)>) -> Result<Self, StrategyError> {
        for (i, (name, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(n, _)| n == name) {
                return Err(StrategyError::DuplicateName(name.clone()));
            }
        }
        Ok(StrategyLibrary { entries })
    }

    /// S1 = Repeat(Simp), S2 = Thens[Dynamic(Induct), Auto],
    /// S3 = Thens[Dynamic(Cases), Auto], S4 = Thens[Auto, Try(Thens[Dynamic(Induct), Auto])].
    pub fn default_library() -> Self {
        parse_library(DEFAULT_LIBRARY).expect("shipped library parses")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &StrategyExpr)> {
        self.entries.iter().map(|(n, e)| (n.as_str(), e))
    }

    pub fn get(&self, name: &str) -> Option<&StrategyExpr> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|(n, _)| n == name)
    }

    pub fn expr(&self, index: usize) -> &StrategyExpr {
        &self.entries[index].1
    }

    pub fn name(&self, index: usize) -> &str {
        &self.entries[index].0
    }
}

impl fmt::Display for StrategyLibrary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, e) in &self.entries {
            writeln!(f, "{n} := {e}")?;
        }
        Ok(())
    }
}

/// One `name := expr` per line; `#` starts a comment.
pub fn parse_library(text: &str) -> Result<StrategyLibrary, StrategyError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(code, _)| code).trim();
        if line.is_empty() {
            continue;
        }
        let at_line = |source| StrategyError::Line { line: idx + 1, source: Box::new(source) };
        let (name, expr) = line
            .split_once(":=")
            .ok_or_else(|| at_line(StrategyError::Syntax { position: 1, msg: "expected `name := strategy`".into() }))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(at_line(StrategyError::Syntax { position: 1, msg: format!("bad strategy name `{name}`") }));
        }
        let expr = parse_strategy(expr).map_err(at_line)?;
        entries.push((name.to_string(), expr));
    }
    StrategyLibrary::new(entries)
}
