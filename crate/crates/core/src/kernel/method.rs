use std::fmt;
use std::str::FromStr;

use super::goal::{Goal, ProofState};
use super::rewrite::{normalize, RuleBook};
use super::term::{replace_var, sym, Sym, Term};
use super::theory::{RewriteRule, Theory};
use super::KernelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodName {
    Refl,
    Simp,
    Auto,
    Hyp,
    Induct,
    Cases,
}

impl MethodName {
    pub const ALL: [MethodName; 6] =
        [MethodName::Refl, MethodName::Simp, MethodName::Auto, MethodName::Hyp, MethodName::Induct, MethodName::Cases];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::Refl => "refl",
            MethodName::Simp => "simp",
            MethodName::Auto => "auto",
            MethodName::Hyp => "hyp",
            MethodName::Induct => "induct",
            MethodName::Cases => "cases",
        }
    }

    pub fn takes_variable(self) -> bool {
        matches!(self, MethodName::Induct | MethodName::Cases)
    }
}

impl fmt::Display for MethodName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodName {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MethodName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| KernelError::UnknownMethod(s.to_string()))
    }
}

/// A method with its (optional) target variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MethodInstance {
    pub method: MethodName,
    pub target: Option<Sym>,
}

impl MethodInstance {
    pub fn simple(method: MethodName) -> Result<Self, KernelError> {
        if method.takes_variable() {
            return Err(KernelError::BadMethodInstance(format!("{method} needs a target variable")));
        }
        Ok(MethodInstance { method, target: None })
    }

    pub fn on(method: MethodName, var: &str) -> Result<Self, KernelError> {
        if !method.takes_variable() {
            return Err(KernelError::BadMethodInstance(format!("{method} takes no variable")));
        }
        Ok(MethodInstance { method, target: Some(sym(var)) })
    }

    pub fn refl() -> Self {
        MethodInstance { method: MethodName::Refl, target: None }
    }
    pub fn simp() -> Self {
        MethodInstance { method: MethodName::Simp, target: None }
    }
    pub fn auto() -> Self {
        MethodInstance { method: MethodName::Auto, target: None }
    }
    pub fn hyp() -> Self {
        MethodInstance { method: MethodName::Hyp, target: None }
    }
    pub fn induct(var: &str) -> Self {
        MethodInstance { method: MethodName::Induct, target: Some(sym(var)) }
    }
    pub fn cases(var: &str) -> Self {
        MethodInstance { method: MethodName::Cases, target: Some(sym(var)) }
    }
}

impl fmt::Display for MethodInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.target {
            Some(v) => write!(f, "{} {v}", self.method),
            None => write!(f, "{}", self.method),
        }
    }
}

/// Applies `m` to the first goal (or to every goal, for `auto`). The result
/// holds at most one successor state; an empty vector means failure.
pub fn apply_method(state: &ProofState, m: &MethodInstance, theory: &Theory, cap: usize) -> Vec<ProofState> {
    step(state, m, theory, cap).into_iter().collect()
}

fn step(state: &ProofState, m: &MethodInstance, theory: &Theory, cap: usize) -> Option<ProofState> {
    let (first, rest) = state.goals.split_first()?;
    if m.method == MethodName::Auto {
        return auto(state, theory, cap);
    }
    let replaced: Vec<Goal> = match (m.method, &m.target) {
        (MethodName::Refl, None) => refl(first).then(Vec::new)?,
        (MethodName::Hyp, None) => hyp(first).then(Vec::new)?,
        (MethodName::Simp, None) => match simp(first, theory, cap) {
            GoalStep::Discharged => Vec::new(),
            GoalStep::Rewritten(g) => vec![g],
            GoalStep::Stuck => return None,
        },
        (MethodName::Induct, Some(v)) => split(first, v, theory, true)?,
        (MethodName::Cases, Some(v)) => split(first, v, theory, false)?,
        _ => return None,
    };
    let mut goals = replaced;
    goals.extend(rest.iter().cloned());
    Some(ProofState::new(goals))
}

enum GoalStep {
    Discharged,
    Rewritten(Goal),
    Stuck,
}

fn refl(goal: &Goal) -> bool {
    goal.lhs == goal.rhs
}

fn hyp(goal: &Goal) -> bool {
    goal.hypotheses.iter().any(|h| h.rewrite_root(&goal.lhs).is_some_and(|rhs| rhs == goal.rhs))
}

fn simp(goal: &Goal, theory: &Theory, cap: usize) -> GoalStep {
    let book = RuleBook::new(&goal.hypotheses, Some(theory));
    let lhs = normalize(&goal.lhs, &book, cap);
    if !lhs.normal {
        return GoalStep::Stuck;
    }
    let rhs = normalize(&goal.rhs, &book, cap);
    if !rhs.normal {
        return GoalStep::Stuck;
    }
    if lhs.term == rhs.term {
        GoalStep::Discharged
    } else if lhs.steps > 0 || rhs.steps > 0 {
        GoalStep::Rewritten(Goal { hypotheses: goal.hypotheses.clone(), lhs: lhs.term, rhs: rhs.term })
    } else {
        GoalStep::Stuck
    }
}

/// `simp; refl; hyp` to fixpoint on one goal. `None` = discharged.
fn auto_goal(goal: &Goal, theory: &Theory, cap: usize) -> (Option<Goal>, bool) {
    let mut current = goal.clone();
    let mut progressed = false;
    loop {
        match simp(&current, theory, cap) {
            GoalStep::Discharged => return (None, true),
            GoalStep::Rewritten(g) => {
                current = g;
                progressed = true;
                continue;
            }
            GoalStep::Stuck => {}
        }
        if refl(&current) || hyp(&current) {
            return (None, true);
        }
        return (Some(current), progressed);
    }
}

fn auto(state: &ProofState, theory: &Theory, cap: usize) -> Option<ProofState> {
    let mut progressed = false;
    let mut goals = Vec::with_capacity(state.goals.len());
    for g in &state.goals {
        let (left, p) = auto_goal(g, theory, cap);
        progressed |= p;
        goals.extend(left);
    }
    progressed.then(|| ProofState::new(goals))
}

/// Smallest-suffix fresh names `base0`, `base1`, ... not used in `goal`.
fn fresh_names(goal: &Goal, base: &str, count: usize) -> Vec<Sym> {
    let used = goal.all_vars();
    let mut out: Vec<Sym> = Vec::with_capacity(count);
    let mut i = 0usize;
    while out.len() < count {
        let candidate = format!("{base}{i}");
        if !used.iter().any(|(n, _)| **n == *candidate) && !out.iter().any(|n| **n == *candidate) {
            out.push(sym(&candidate));
        }
        i += 1;
    }
    out
}

/// Structural case split on `var`; with `induction`, adds one hypothesis per
/// recursive constructor argument.
fn split(goal: &Goal, var: &str, theory: &Theory, induction: bool) -> Option<Vec<Goal>> {
    let ty = goal.var_type(var)?;
    let dt = theory.datatype(&ty)?;
    // Hypotheses are facts about fixed values; inducting on a variable they
    // constrain would need them as premises of the new hypothesis.
    if induction && goal.hypotheses_mention(var) {
        return None;
    }
    let mut subgoals = Vec::with_capacity(dt.constructors.len());
    for c in &dt.constructors {
        let names = fresh_names(goal, var, c.args.len());
        let fresh: Vec<Term> =
            names.iter().zip(&c.args).map(|(n, t)| Term::Var { name: n.clone(), ty: t.clone() }).collect();
        let instance = Term::Ctor { name: c.name.clone(), ty: dt.name.clone(), args: fresh.clone() };
        let mut hypotheses: Vec<RewriteRule> = goal
            .hypotheses
            .iter()
            .map(|h| RewriteRule {
                lhs: replace_var(&h.lhs, var, &instance),
                rhs: replace_var(&h.rhs, var, &instance),
                kind: h.kind,
            })
            .collect();
        if induction {
            for r in fresh.iter().filter(|r| dt.is_recursive_arg(r.ty())) {
                hypotheses.push(RewriteRule::fixed(replace_var(&goal.lhs, var, r), replace_var(&goal.rhs, var, r)));
            }
        }
        subgoals.push(Goal {
            hypotheses,
            lhs: replace_var(&goal.lhs, var, &instance),
            rhs: replace_var(&goal.rhs, var, &instance),
        });
    }
    Some(subgoals)
}

/// Re-applies a recorded method trace. Returns the final state, or `None`
/// if some step fails.
pub fn replay(initial: &ProofState, trace: &[MethodInstance], theory: &Theory, cap: usize) -> Option<ProofState> {
    trace.iter().try_fold(initial.clone(), |st, m| step(&st, m, theory, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{default_theory, parse_term_in};
    use crate::kernel::DEFAULT_STEP_CAP;

    const VARS: &[(&str, &str)] = &[("n", "nat"), ("n0", "nat"), ("m", "nat"), ("x", "nat"), ("y", "nat"), ("xs", "list")];

    fn t(s: &str) -> Term {
        parse_term_in(&default_theory(), s, VARS).unwrap()
    }

    fn state(l: &str, r: &str) -> ProofState {
        ProofState::single(Goal::new(t(l), t(r)))
    }

    fn apply(st: &ProofState, m: MethodInstance) -> Vec<ProofState> {
        apply_method(st, &m, &default_theory(), DEFAULT_STEP_CAP)
    }

    #[test]
    fn refl_closes_syntactic_equality() {
        assert_eq!(apply(&state("x", "x"), MethodInstance::refl()), vec![ProofState::default()]);
        assert!(apply(&state("x", "y"), MethodInstance::refl()).is_empty());
    }

    #[test]
    fn induct_builds_schema() {
        let out = apply(&state("add(n, Zero)", "n"), MethodInstance::induct("n"));
        assert_eq!(out.len(), 1);
        let goals = &out[0].goals;
        assert_eq!(goals.len(), 2);
        assert_eq!(goals[0], Goal::new(t("Zero"), t("Zero")).with_lhs(t("add(Zero, Zero)")));
        let n0 = Term::var("n0", "nat");
        let suc_n0 = default_theory().ctor_app("Suc", vec![n0.clone()]).unwrap();
        let expected = Goal {
            hypotheses: vec![RewriteRule::fixed(default_theory().fun_app("add", vec![n0.clone(), t("Zero")]).unwrap(), n0)],
            lhs: default_theory().fun_app("add", vec![suc_n0.clone(), t("Zero")]).unwrap(),
            rhs: suc_n0,
        };
        assert_eq!(goals[1], expected);
        assert_eq!(goals[1].to_string(), "{add(n0, Zero) -> n0} ⊢ add(Suc(n0), Zero) = Suc(n0)");
    }

    #[test]
    fn simp_without_progress_fails() {
        assert!(apply(&state("x", "y"), MethodInstance::simp()).is_empty());
    }

    #[test]
    fn simp_rewrites_or_discharges() {
        assert_eq!(apply(&state("add(Zero, n)", "n"), MethodInstance::simp()), vec![ProofState::default()]);
        let out = apply(&state("add(Suc(n), Zero)", "n"), MethodInstance::simp());
        assert_eq!(out, vec![state("Suc(add(n, Zero))", "n")]);
    }

    #[test]
    fn cases_adds_no_hypotheses() {
        let out = apply(&state("append(xs, Nil)", "xs"), MethodInstance::cases("xs"));
        let goals = &out[0].goals;
        assert_eq!(goals.len(), 2);
        assert!(goals.iter().all(|g| g.hypotheses.is_empty()));
        assert_eq!(goals[1].lhs.to_string(), "append(Cons(xs0, xs1), Nil)");
    }

    #[test]
    fn induct_on_list_adds_one_hypothesis() {
        let out = apply(&state("append(xs, Nil)", "xs"), MethodInstance::induct("xs"));
        let goals = &out[0].goals;
        assert_eq!(goals[0].hypotheses.len(), 0);
        assert_eq!(goals[1].hypotheses.len(), 1);
        assert_eq!(goals[1].hypotheses[0].to_string(), "append(xs1, Nil) -> xs1");
    }

    #[test]
    fn fresh_names_skip_used() {
        let out = apply(&state("add(n, n0)", "add(n0, n)"), MethodInstance::induct("n"));
        assert_eq!(out[0].goals[1].lhs.to_string(), "add(Suc(n1), n0)");
    }

    #[test]
    fn induct_on_missing_variable_fails() {
        assert!(apply(&state("add(n, Zero)", "n"), MethodInstance::induct("m")).is_empty());
        assert!(apply(&state("Zero", "Zero"), MethodInstance::cases("n")).is_empty());
    }

    #[test]
    fn only_first_goal_is_touched() {
        let st = ProofState::new(vec![Goal::new(t("x"), t("x")), Goal::new(t("add(Zero, y)"), t("y"))]);
        let out = apply(&st, MethodInstance::refl());
        assert_eq!(out[0].goals, vec![Goal::new(t("add(Zero, y)"), t("y"))]);
        let stuck = ProofState::new(vec![Goal::new(t("x"), t("y")), Goal::new(t("add(Zero, y)"), t("y"))]);
        assert!(apply(&stuck, MethodInstance::simp()).is_empty());
    }

    #[test]
    fn auto_touches_every_goal() {
        let st = ProofState::new(vec![
            Goal::new(t("add(n, Zero)"), t("n")),
            Goal::new(t("add(Zero, y)"), t("y")),
        ]);
        let out = apply(&st, MethodInstance::auto());
        assert_eq!(out, vec![ProofState::single(Goal::new(t("add(n, Zero)"), t("n")))]);
        let stuck = ProofState::single(Goal::new(t("add(n, Zero)"), t("n")));
        assert!(apply(&stuck, MethodInstance::auto()).is_empty());
    }

    #[test]
    fn hyp_uses_fixed_hypothesis() {
        let g = Goal {
            hypotheses: vec![RewriteRule::fixed(t("add(n, Zero)"), t("n"))],
            lhs: t("add(n, Zero)"),
            rhs: t("n"),
        };
        assert_eq!(apply(&ProofState::single(g), MethodInstance::hyp()), vec![ProofState::default()]);
    }

    #[test]
    fn replay_reproduces_proof() {
        let st = state("add(n, Zero)", "n");
        let trace = [MethodInstance::induct("n"), MethodInstance::auto()];
        assert_eq!(replay(&st, &trace, &default_theory(), DEFAULT_STEP_CAP), Some(ProofState::default()));
        assert_eq!(replay(&st, &trace[1..], &default_theory(), DEFAULT_STEP_CAP), None);
    }

    #[test]
    fn empty_state_admits_no_method() {
        assert!(apply(&ProofState::default(), MethodInstance::auto()).is_empty());
    }

    impl Goal {
        fn with_lhs(mut self, lhs: Term) -> Self {
            self.lhs = lhs;
            self
        }
    }
}
