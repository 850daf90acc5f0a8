use std::fmt;

use super::term::{Sym, Term};
use super::theory::RewriteRule;

/// An equation to prove under oriented hypotheses. Free variables are
/// implicitly universally quantified.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Goal {
    pub hypotheses: Vec<RewriteRule>,
    pub lhs: Term,
    pub rhs: Term,
}

impl Goal {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Goal { hypotheses: Vec::new(), lhs, rhs }
    }

    /// Free variables of the conclusion, lhs before rhs, first occurrence order.
    pub fn conclusion_vars(&self) -> Vec<(Sym, Sym)> {
        let mut out = Vec::new();
        self.lhs.collect_vars(&mut out);
        self.rhs.collect_vars(&mut out);
        out
    }

    /// Free variables of conclusion and hypotheses.
    pub fn all_vars(&self) -> Vec<(Sym, Sym)> {
        let mut out = self.conclusion_vars();
        for h in &self.hypotheses {
            h.lhs.collect_vars(&mut out);
            h.rhs.collect_vars(&mut out);
        }
        out
    }

    pub fn var_type(&self, name: &str) -> Option<Sym> {
        self.all_vars().into_iter().find(|(n, _)| &**n == name).map(|(_, t)| t)
    }

    pub fn hypotheses_mention(&self, var: &str) -> bool {
        self.hypotheses.iter().any(|h| h.lhs.contains_var(var) || h.rhs.contains_var(var))
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hypotheses.is_empty() {
            f.write_str("{")?;
            for (i, h) in self.hypotheses.iter().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                write!(f, "{h}")?;
            }
            f.write_str("} ⊢ ")?;
        }
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Ordered list of open goals. Proved iff empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ProofState {
    pub goals: Vec<Goal>,
}

impl ProofState {
    pub fn new(goals: Vec<Goal>) -> Self {
        ProofState { goals }
    }

    pub fn single(goal: Goal) -> Self {
        ProofState { goals: vec![goal] }
    }

    pub fn is_proved(&self) -> bool {
        self.goals.is_empty()
    }

    pub fn first(&self) -> Option<&Goal> {
        self.goals.first()
    }
}

impl fmt::Display for ProofState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.goals.is_empty() {
            return f.write_str("[]");
        }
        f.write_str("[")?;
        for (i, g) in self.goals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("]")
    }
}
