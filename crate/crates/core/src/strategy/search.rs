//! Depth-first backtracking interpreter.
//!
//! Written in continuation-passing style: every combinator hands each state it
//! produces to a continuation, which either keeps searching (`Continue`) or
//! halts the whole search (`Break`). Backtracking is simply returning
//! `Continue` to the caller.

use std::ops::ControlFlow;

use crate::kernel::{apply_method, MethodInstance, MethodName, ProofState, Theory, DEFAULT_STEP_CAP};

use super::ast::StrategyExpr;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// The first complete proof found in DFS order.
    Proved(Vec<MethodInstance>),
    /// Every branch failed within budget.
    Exhausted,
    /// Budget consumed before the search finished.
    BudgetOut,
}

impl Outcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, Outcome::Proved(_))
    }

    pub fn trace(&self) -> Option<&[MethodInstance]> {
        match self {
            Outcome::Proved(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub outcome: Outcome,
    /// Number of method applications charged.
    pub used: usize,
}

/// One instance per inductive free variable of the first goal's conclusion,
/// in first-occurrence order.
pub fn instantiate_dynamic(method: MethodName, state: &ProofState, theory: &Theory) -> Vec<MethodInstance> {
    let Some(goal) = state.first() else { return Vec::new() };
    goal.conclusion_vars()
        .into_iter()
        .filter(|(_, ty)| theory.datatype(ty).is_some())
        .map(|(v, _)| MethodInstance { method, target: Some(v) })
        .collect()
}

/// Runs `expr` on `state`, charging one unit of `budget` per method application.
pub fn run_strategy(state: &ProofState, expr: &StrategyExpr, theory: &Theory, budget: usize) -> RunResult {
    run_strategy_capped(state, expr, theory, budget, DEFAULT_STEP_CAP)
}

pub fn run_strategy_capped(
    state: &ProofState,
    expr: &StrategyExpr,
    theory: &Theory,
    budget: usize,
    step_cap: usize,
) -> RunResult {
    if state.is_proved() {
        return RunResult { outcome: Outcome::Proved(Vec::new()), used: 0 };
    }
    let mut search = Search { theory, step_cap, remaining: budget, used: 0, trace: Vec::new() };
    let flow = search.run(expr, state.clone(), &mut |s: &mut Search<'_>, st: ProofState| {
        if st.is_proved() {
            ControlFlow::Break(Halt::Proved(s.trace.clone()))
        } else {
            ControlFlow::Continue(())
        }
    });
    let outcome = match flow {
        ControlFlow::Break(Halt::Proved(trace)) => Outcome::Proved(trace),
        ControlFlow::Break(Halt::BudgetOut) => Outcome::BudgetOut,
        ControlFlow::Continue(()) => Outcome::Exhausted,
    };
    RunResult { outcome, used: search.used }
}

enum Halt {
    Proved(Vec<MethodInstance>),
    BudgetOut,
}

type Flow = ControlFlow<Halt>;
type Cont<'k, 'a> = dyn FnMut(&mut Search<'a>, ProofState) -> Flow + 'k;

struct Search<'a> {
    theory: &'a Theory,
    step_cap: usize,
    remaining: usize,
    used: usize,
    trace: Vec<MethodInstance>,
}

impl<'a> Search<'a> {
    fn run(&mut self, expr: &StrategyExpr, st: ProofState, k: &mut Cont<'_, 'a>) -> Flow {
        match expr {
            StrategyExpr::Atom(m) => self.apply(m, st, k),
            StrategyExpr::Dynamic(method) => {
                for m in instantiate_dynamic(*method, &st, self.theory) {
                    self.apply(&m, st.clone(), k)?;
                }
                ControlFlow::Continue(())
            }
            StrategyExpr::Thens(es) => self.run_seq(es, st, k),
            StrategyExpr::Ors(es) => {
                for e in es {
                    self.run(e, st.clone(), k)?;
                }
                ControlFlow::Continue(())
            }
            StrategyExpr::Try(e) => {
                self.run(e, st.clone(), k)?;
                k(self, st)
            }
            StrategyExpr::Repeat(e) => {
                let before = st.clone();
                self.run(e, st, &mut |s: &mut Search<'a>, next: ProofState| {
                    // A step that changes nothing is a fixpoint; the fallback
                    // below yields that state.
                    if next == before {
                        ControlFlow::Continue(())
                    } else {
                        s.run(expr, next, k)
                    }
                })?;
                k(self, before)
            }
        }
    }

    fn run_seq(&mut self, es: &[StrategyExpr], st: ProofState, k: &mut Cont<'_, 'a>) -> Flow {
        match es.split_first() {
            None => k(self, st),
            Some((first, rest)) => {
                self.run(first, st, &mut |s: &mut Search<'a>, next: ProofState| s.run_seq(rest, next, k))
            }
        }
    }

    fn apply(&mut self, m: &MethodInstance, st: ProofState, k: &mut Cont<'_, 'a>) -> Flow {
        if st.is_proved() {
            return ControlFlow::Continue(());
        }
        if self.remaining == 0 {
            return ControlFlow::Break(Halt::BudgetOut);
        }
        self.remaining -= 1;
        self.used += 1;
        for next in apply_method(&st, m, self.theory, self.step_cap) {
            self.trace.push(m.clone());
            let flow = k(self, next);
            self.trace.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}
