use super::term::Term;
use super::theory::{RewriteRule, Theory};

/// Default per-call rewrite step cap.
pub const DEFAULT_STEP_CAP: usize = 1000;

/// Ordered rule source: `first` (usually hypotheses) is consulted before the
/// theory's rules.
#[derive(Clone, Copy, Debug)]
pub struct RuleBook<'a> {
    first: &'a [RewriteRule],
    theory: Option<&'a Theory>,
}

impl<'a> RuleBook<'a> {
    pub fn new(first: &'a [RewriteRule], theory: Option<&'a Theory>) -> Self {
        RuleBook { first, theory }
    }

    pub fn from_rules(rules: &'a [RewriteRule]) -> Self {
        RuleBook { first: rules, theory: None }
    }

    fn rewrite_root(&self, t: &Term) -> Option<Term> {
        let theory_rules = match (self.theory, t) {
            (Some(th), Term::Fun { name, .. }) => th.rules_for(name),
            _ => &[],
        };
        self.first.iter().chain(theory_rules).find_map(|r| r.rewrite_root(t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub term: Term,
    pub steps: usize,
    /// False when the cap ran out with redexes remaining.
    pub normal: bool,
}

/// Leftmost-innermost rewriting with first-applicable-rule selection, at most
/// `cap` steps.
pub fn normalize(term: &Term, rules: &RuleBook<'_>, cap: usize) -> Normalized {
    let mut run = Run { rules, cap, steps: 0, exhausted: false };
    let term = run.norm(term);
    Normalized { term, steps: run.steps, normal: !run.exhausted }
}

/// Convenience wrapper over a plain rule list.
pub fn normalize_with(term: &Term, rules: &[RewriteRule], cap: usize) -> Normalized {
    normalize(term, &RuleBook::from_rules(rules), cap)
}

struct Run<'r, 'a> {
    rules: &'r RuleBook<'a>,
    cap: usize,
    steps: usize,
    exhausted: bool,
}

impl Run<'_, '_> {
    // Normalizing arguments left to right and then retrying the root visits
    // redexes in exactly leftmost-innermost order.
    fn norm(&mut self, t: &Term) -> Term {
        if self.exhausted {
            return t.clone();
        }
        let mut current = if t.args().is_empty() {
            t.clone()
        } else {
            let args = t.args().iter().map(|a| self.norm(a)).collect();
            t.rebuild(args)
        };
        loop {
            if self.exhausted {
                return current;
            }
            let Some(next) = self.rules.rewrite_root(&current) else {
                return current;
            };
            if self.steps == self.cap {
                self.exhausted = true;
                return current;
            }
            self.steps += 1;
            // The contractum may contain new redexes anywhere below the root.
            current = if next.args().is_empty() {
                next
            } else {
                let args = next.args().iter().map(|a| self.norm(a)).collect();
                next.rebuild(args)
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{default_theory, parse_term_in};

    fn t(s: &str) -> Term {
        parse_term_in(&default_theory(), s, &[("n", "nat"), ("y", "nat"), ("xs", "list")]).unwrap()
    }

    fn norm(s: &str) -> Normalized {
        let th = default_theory();
        normalize(&t(s), &RuleBook::new(&[], Some(&th)), 100)
    }

    #[test]
    fn single_base_step() {
        let n = norm("add(Zero, y)");
        assert_eq!((n.term, n.steps, n.normal), (t("y"), 1, true));
    }

    #[test]
    fn two_step_trace() {
        let n = norm("add(Suc(Zero), Zero)");
        assert_eq!((n.term, n.steps), (t("Suc(Zero)"), 2));
    }

    #[test]
    fn variable_has_no_redex() {
        let n = norm("n");
        assert_eq!((n.term, n.steps), (t("n"), 0));
    }

    #[test]
    fn cap_exhaustion_is_flagged() {
        let th = default_theory();
        let big = t("mul(Suc(Suc(Suc(Zero))), Suc(Suc(Suc(Zero))))");
        let n = normalize(&big, &RuleBook::new(&[], Some(&th)), 3);
        assert!(!n.normal);
        assert_eq!(n.steps, 3);
        let full = normalize(&big, &RuleBook::new(&[], Some(&th)), 1000);
        assert!(full.normal);
        assert_eq!(full.term.size(), 10);
    }

    #[test]
    fn hypotheses_take_priority() {
        let th = default_theory();
        let hyp = RewriteRule::fixed(t("add(n, Zero)"), t("n"));
        let hyps = [hyp];
        let n = normalize(&t("add(Suc(n), Zero)"), &RuleBook::new(&hyps, Some(&th)), 100);
        assert_eq!(n.term, t("Suc(n)"));
        assert_eq!(n.steps, 2);
    }

    #[test]
    fn fixed_rules_match_only_literally() {
        let th = default_theory();
        let hyps = [RewriteRule::fixed(t("add(n, Zero)"), t("n"))];
        let n = normalize(&t("add(y, Zero)"), &RuleBook::new(&hyps, Some(&th)), 100);
        assert_eq!(n.steps, 0);
    }

    #[test]
    fn leftmost_innermost_order() {
        // Left argument is rewritten before the right one; the root last.
        let th = default_theory();
        let rules: Vec<RewriteRule> = th.rules().cloned().collect();
        let n = normalize_with(&t("add(add(Zero, Zero), add(Zero, Suc(Zero)))"), &rules, 2);
        assert!(!n.normal);
        assert_eq!(n.term, t("add(Zero, Suc(Zero))"));
    }
}
