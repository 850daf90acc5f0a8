use std::fmt;

use crate::kernel::{MethodInstance, MethodName};

/// Strategy expression. `Thens`/`Ors` lists are never empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StrategyExpr {
    Atom(MethodInstance),
    /// Expanded per goal into one instance per inductive free variable.
    Dynamic(MethodName),
    Thens(Vec<StrategyExpr>),
    Ors(Vec<StrategyExpr>),
    Repeat(Box<StrategyExpr>),
    Try(Box<StrategyExpr>),
}

impl StrategyExpr {
    pub fn atom(m: MethodInstance) -> Self {
        StrategyExpr::Atom(m)
    }

    pub fn repeat(e: StrategyExpr) -> Self {
        StrategyExpr::Repeat(Box::new(e))
    }

    pub fn try_(e: StrategyExpr) -> Self {
        StrategyExpr::Try(Box::new(e))
    }
}

fn keyword(m: MethodName) -> &'static str {
    match m {
        MethodName::Refl => "Refl",
        MethodName::Simp => "Simp",
        MethodName::Auto => "Auto",
        MethodName::Hyp => "Hyp",
        MethodName::Induct => "Induct",
        MethodName::Cases => "Cases",
    }
}

pub(crate) fn method_from_keyword(kw: &str) -> Option<MethodName> {
    MethodName::ALL.into_iter().find(|m| keyword(*m) == kw)
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, items: &[StrategyExpr]) -> fmt::Result {
    write!(f, "{name} [")?;
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str("]")
}

impl fmt::Display for StrategyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyExpr::Atom(m) => match &m.target {
                Some(v) => write!(f, "{} {v}", keyword(m.method)),
                None => f.write_str(keyword(m.method)),
            },
            StrategyExpr::Dynamic(m) => write!(f, "Dynamic({})", keyword(*m)),
            StrategyExpr::Thens(es) => write_list(f, "Thens", es),
            StrategyExpr::Ors(es) => write_list(f, "Ors", es),
            StrategyExpr::Repeat(e) => write!(f, "Repeat({e})"),
            StrategyExpr::Try(e) => write!(f, "Try({e})"),
        }
    }
}
