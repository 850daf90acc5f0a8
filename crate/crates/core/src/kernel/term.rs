use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::KernelError;

/// Interned-ish identifier. Cheap to clone, compares by content.
pub type Sym = Arc<str>;

pub fn sym(s: &str) -> Sym {
    Arc::from(s)
}

/// First-order term over declared datatypes. Every node carries its datatype
/// so typing never needs a theory lookup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var { name: Sym, ty: Sym },
    Ctor { name: Sym, ty: Sym, args: Vec<Term> },
    Fun { name: Sym, ty: Sym, args: Vec<Term> },
}

/// Variable name → replacement term.
pub type Binding = BTreeMap<Sym, Term>;

impl Term {
    pub fn var(name: &str, ty: &str) -> Term {
        Term::Var { name: sym(name), ty: sym(ty) }
    }

    pub fn ty(&self) -> &Sym {
        match self {
            Term::Var { ty, .. } | Term::Ctor { ty, .. } | Term::Fun { ty, .. } => ty,
        }
    }

    /// Head symbol: the variable name for variables, otherwise the applied symbol.
    pub fn head(&self) -> &Sym {
        match self {
            Term::Var { name, .. } | Term::Ctor { name, .. } | Term::Fun { name, .. } => name,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var { .. } => &[],
            Term::Ctor { args, .. } | Term::Fun { args, .. } => args,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var { .. })
    }

    pub fn is_fun(&self) -> bool {
        matches!(self, Term::Fun { .. })
    }

    pub fn is_ctor(&self) -> bool {
        matches!(self, Term::Ctor { .. })
    }

    /// Leaves count as depth 1.
    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    /// Free variables as (name, type), in left-to-right first-occurrence order.
    pub fn vars(&self) -> Vec<(Sym, Sym)> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<(Sym, Sym)>) {
        match self {
            Term::Var { name, ty } => {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((name.clone(), ty.clone()));
                }
            }
            _ => self.args().iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Number of occurrences of the named variable.
    pub fn occurrences(&self, var: &str) -> usize {
        match self {
            Term::Var { name, .. } => usize::from(&**name == var),
            _ => self.args().iter().map(|a| a.occurrences(var)).sum(),
        }
    }

    pub fn contains_var(&self, var: &str) -> bool {
        match self {
            Term::Var { name, .. } => &**name == var,
            _ => self.args().iter().any(|a| a.contains_var(var)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var { .. } => false,
            _ => self.args().iter().all(Term::is_ground),
        }
    }

    /// Pre-order walk over every subterm including `self`.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.args().iter().rev());
        }
        out
    }

    pub(crate) fn rebuild(&self, args: Vec<Term>) -> Term {
        match self {
            Term::Var { .. } => self.clone(),
            Term::Ctor { name, ty, .. } => Term::Ctor { name: name.clone(), ty: ty.clone(), args },
            Term::Fun { name, ty, .. } => Term::Fun { name: name.clone(), ty: ty.clone(), args },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { name, .. } => f.write_str(name),
            Term::Ctor { name, args, .. } | Term::Fun { name, args, .. } => {
                f.write_str(name)?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// First-order syntactic matching. Returns the unique binding `b` with
/// `substitute(pattern, b) == subject`, or `None`.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Binding> {
    let mut binding = Binding::new();
    match_into(pattern, subject, &mut binding).then_some(binding)
}

pub(crate) fn match_into(pattern: &Term, subject: &Term, binding: &mut Binding) -> bool {
    match pattern {
        Term::Var { name, ty } => {
            if ty != subject.ty() {
                return false;
            }
            match binding.get(name) {
                Some(bound) => bound == subject,
                None => {
                    binding.insert(name.clone(), subject.clone());
                    true
                }
            }
        }
        Term::Ctor { name, args, .. } => match subject {
            Term::Ctor { name: sn, args: sargs, .. } if sn == name && sargs.len() == args.len() => {
                args.iter().zip(sargs).all(|(p, s)| match_into(p, s, binding))
            }
            _ => false,
        },
        Term::Fun { name, args, .. } => match subject {
            Term::Fun { name: sn, args: sargs, .. } if sn == name && sargs.len() == args.len() => {
                args.iter().zip(sargs).all(|(p, s)| match_into(p, s, binding))
            }
            _ => false,
        },
    }
}

/// Simultaneous replacement of variables. Fails if a binding would change the
/// type of a variable occurrence.
pub fn substitute(term: &Term, binding: &Binding) -> Result<Term, KernelError> {
    for (name, t) in binding {
        if let Some(ty) = type_of_var(term, name) {
            if &ty != t.ty() {
                return Err(KernelError::IllTypedSubstitution {
                    var: name.to_string(),
                    expected: ty.to_string(),
                    found: t.ty().to_string(),
                });
            }
        }
    }
    Ok(substitute_unchecked(term, binding))
}

fn type_of_var(term: &Term, var: &str) -> Option<Sym> {
    term.subterms().into_iter().find_map(|t| match t {
        Term::Var { name, ty } if &**name == var => Some(ty.clone()),
        _ => None,
    })
}

/// Substitution for bindings already known to be well typed (e.g. produced by `match_term`).
pub(crate) fn substitute_unchecked(term: &Term, binding: &Binding) -> Term {
    match term {
        Term::Var { name, .. } => binding.get(name).cloned().unwrap_or_else(|| term.clone()),
        _ => term.rebuild(term.args().iter().map(|a| substitute_unchecked(a, binding)).collect()),
    }
}

/// Replace one variable everywhere.
pub fn replace_var(term: &Term, var: &str, with: &Term) -> Term {
    match term {
        Term::Var { name, .. } if &**name == var => with.clone(),
        Term::Var { .. } => term.clone(),
        _ => term.rebuild(term.args().iter().map(|a| replace_var(a, var, with)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero() -> Term {
        Term::Ctor { name: sym("Zero"), ty: sym("nat"), args: vec![] }
    }
    fn suc(t: Term) -> Term {
        Term::Ctor { name: sym("Suc"), ty: sym("nat"), args: vec![t] }
    }
    fn add(a: Term, b: Term) -> Term {
        Term::Fun { name: sym("add"), ty: sym("nat"), args: vec![a, b] }
    }
    fn mul(a: Term, b: Term) -> Term {
        Term::Fun { name: sym("mul"), ty: sym("nat"), args: vec![a, b] }
    }

    #[test]
    fn match_direct_pattern() {
        let y = Term::var("y", "nat");
        let b = match_term(&add(zero(), y), &add(zero(), suc(zero()))).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[&sym("y")], suc(zero()));
    }

    #[test]
    fn match_variable_pattern() {
        let x = Term::var("x", "nat");
        let subject = add(suc(zero()), Term::var("z", "nat"));
        let b = match_term(&x, &subject).unwrap();
        assert_eq!(b[&sym("x")], subject);
    }

    #[test]
    fn match_head_mismatch() {
        let y = Term::var("y", "nat");
        assert!(match_term(&add(zero(), y), &mul(zero(), zero())).is_none());
    }

    #[test]
    fn match_respects_types_and_nonlinearity() {
        let x = Term::var("x", "list");
        assert!(match_term(&x, &zero()).is_none());
        let x = Term::var("x", "nat");
        assert!(match_term(&add(x.clone(), x.clone()), &add(zero(), suc(zero()))).is_none());
        assert!(match_term(&add(x.clone(), x), &add(zero(), zero())).is_some());
    }

    #[test]
    fn substitute_examples() {
        let x = Term::var("x", "nat");
        let y = Term::var("y", "nat");
        let b: Binding = [(sym("x"), zero())].into_iter().collect();
        assert_eq!(substitute(&suc(x.clone()), &b).unwrap(), suc(zero()));

        let b: Binding = [(sym("x"), y.clone())].into_iter().collect();
        assert_eq!(substitute(&add(x.clone(), y.clone()), &b).unwrap(), add(y.clone(), y.clone()));

        let b: Binding = [(sym("x"), suc(zero()))].into_iter().collect();
        assert_eq!(substitute(&zero(), &b).unwrap(), zero());
    }

    #[test]
    fn substitute_is_simultaneous() {
        let x = Term::var("x", "nat");
        let y = Term::var("y", "nat");
        let b: Binding = [(sym("x"), y.clone()), (sym("y"), x.clone())].into_iter().collect();
        assert_eq!(substitute(&add(x.clone(), y.clone()), &b).unwrap(), add(y, x));
    }

    #[test]
    fn substitute_rejects_ill_typed() {
        let x = Term::var("x", "nat");
        let nil = Term::Ctor { name: sym("Nil"), ty: sym("list"), args: vec![] };
        let b: Binding = [(sym("x"), nil)].into_iter().collect();
        assert!(matches!(
            substitute(&suc(x), &b),
            Err(KernelError::IllTypedSubstitution { .. })
        ));
    }

    #[test]
    fn display_and_measures() {
        let t = add(suc(zero()), Term::var("n", "nat"));
        assert_eq!(t.to_string(), "add(Suc(Zero), n)");
        assert_eq!(t.depth(), 3);
        assert_eq!(t.size(), 4);
        assert!(!t.is_ground());
    }
}
