use std::collections::HashMap;
use std::fmt;

use super::term::{match_into, Binding, Sym, Term};
use super::KernelError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub name: Sym,
    /// Argument datatypes. An entry equal to the owning datatype is a recursive argument.
    pub args: Vec<Sym>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Datatype {
    pub name: Sym,
    pub constructors: Vec<Constructor>,
}

impl Datatype {
    pub fn is_recursive_arg(&self, ty: &str) -> bool {
        &*self.name == ty
    }
}

/// How a rule's variables behave when it is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Theory equations: variables are pattern variables.
    Schematic,
    /// Goal hypotheses: variables denote fixed (but arbitrary) values and
    /// match only themselves.
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    pub lhs: Term,
    pub rhs: Term,
    pub kind: RuleKind,
}

impl RewriteRule {
    /// Schematic rule; the lhs must be a function application and the rhs may
    /// only mention lhs variables.
    pub fn schematic(lhs: Term, rhs: Term) -> Result<Self, KernelError> {
        if !lhs.is_fun() {
            return Err(KernelError::BadRule(format!("lhs `{lhs}` is not a function application")));
        }
        let lhs_vars = lhs.vars();
        if let Some((v, _)) = rhs.vars().into_iter().find(|(v, _)| !lhs_vars.iter().any(|(l, _)| l == v)) {
            return Err(KernelError::BadRule(format!("rhs variable `{v}` does not occur in lhs `{lhs}`")));
        }
        if lhs.ty() != rhs.ty() {
            return Err(KernelError::BadRule(format!(
                "sides have different types: {} vs {}",
                lhs.ty(),
                rhs.ty()
            )));
        }
        Ok(RewriteRule { lhs, rhs, kind: RuleKind::Schematic })
    }

    pub fn fixed(lhs: Term, rhs: Term) -> Self {
        RewriteRule { lhs, rhs, kind: RuleKind::Fixed }
    }

    /// The rewrite result if this rule applies at the root of `subject`.
    pub fn rewrite_root(&self, subject: &Term) -> Option<Term> {
        match self.kind {
            RuleKind::Fixed => (self.lhs == *subject).then(|| self.rhs.clone()),
            RuleKind::Schematic => {
                let mut b = Binding::new();
                match_into(&self.lhs, subject, &mut b)
                    .then(|| super::term::substitute_unchecked(&self.rhs, &b))
            }
        }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Function {
    pub name: Sym,
    pub arg_types: Vec<Sym>,
    pub result: Sym,
    pub rules: Vec<RewriteRule>,
}

impl Function {
    /// Index of the argument the rules pattern-match on (first argument
    /// position holding a constructor pattern; 0 if none).
    pub fn recursion_position(&self) -> usize {
        (0..self.arg_types.len())
            .find(|&i| self.rules.iter().any(|r| r.lhs.args().get(i).is_some_and(Term::is_ctor)))
            .unwrap_or(0)
    }
}

/// Datatypes plus defined functions. Rules are kept in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub datatypes: Vec<Datatype>,
    pub functions: Vec<Function>,
    ctor_index: HashMap<Sym, (usize, usize)>,
    fun_index: HashMap<Sym, usize>,
}

impl Theory {
    pub fn new(datatypes: Vec<Datatype>, functions: Vec<Function>) -> Result<Self, KernelError> {
        let mut theory = Theory { datatypes, functions, ..Default::default() };
        theory.reindex()?;
        theory.validate()?;
        Ok(theory)
    }

    fn reindex(&mut self) -> Result<(), KernelError> {
        self.ctor_index.clear();
        self.fun_index.clear();
        let mut type_names: Vec<&Sym> = Vec::new();
        for (d, dt) in self.datatypes.iter().enumerate() {
            if type_names.contains(&&dt.name) {
                return Err(KernelError::Duplicate(dt.name.to_string()));
            }
            type_names.push(&dt.name);
            for (c, ctor) in dt.constructors.iter().enumerate() {
                if self.ctor_index.insert(ctor.name.clone(), (d, c)).is_some() {
                    return Err(KernelError::Duplicate(ctor.name.to_string()));
                }
            }
        }
        for (i, f) in self.functions.iter().enumerate() {
            if self.ctor_index.contains_key(&f.name) || self.fun_index.insert(f.name.clone(), i).is_some() {
                return Err(KernelError::Duplicate(f.name.to_string()));
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), KernelError> {
        for dt in &self.datatypes {
            if dt.constructors.is_empty() {
                return Err(KernelError::IllFormed(format!("datatype {} has no constructors", dt.name)));
            }
            for c in &dt.constructors {
                if let Some(t) = c.args.iter().find(|t| self.datatype(t).is_none()) {
                    return Err(KernelError::UnknownType(t.to_string()));
                }
            }
            if dt.constructors.iter().all(|c| c.args.iter().any(|a| dt.is_recursive_arg(a))) {
                return Err(KernelError::IllFormed(format!(
                    "datatype {} has no non-recursive constructor",
                    dt.name
                )));
            }
        }
        for f in &self.functions {
            for r in &f.rules {
                if r.lhs.head() != &f.name {
                    return Err(KernelError::BadRule(format!("rule `{r}` does not define {}", f.name)));
                }
            }
            for (i, r) in f.rules.iter().enumerate() {
                if f.rules[..i].iter().any(|p| p.lhs == r.lhs) {
                    return Err(KernelError::BadRule(format!("duplicate case `{}`", r.lhs)));
                }
            }
        }
        Ok(())
    }

    pub fn datatype(&self, name: &str) -> Option<&Datatype> {
        self.datatypes.iter().find(|d| &*d.name == name)
    }

    /// (owning datatype, constructor)
    pub fn constructor(&self, name: &str) -> Option<(&Datatype, &Constructor)> {
        self.ctor_index.get(name).map(|&(d, c)| {
            let dt = &self.datatypes[d];
            (dt, &dt.constructors[c])
        })
    }

    pub fn function(&self, name: &str) -> Option<&Function> {
        self.fun_index.get(name).map(|&i| &self.functions[i])
    }

    pub fn rules_for(&self, name: &str) -> &[RewriteRule] {
        self.function(name).map(|f| f.rules.as_slice()).unwrap_or(&[])
    }

    /// Every theory rule in declaration order.
    pub fn rules(&self) -> impl Iterator<Item = &RewriteRule> {
        self.functions.iter().flat_map(|f| f.rules.iter())
    }

    /// Whether some constructor of the recursion-position datatype has no
    /// rule case.
    pub fn is_partial(&self, fun: &str) -> bool {
        let Some(f) = self.function(fun) else { return false };
        let pos = f.recursion_position();
        let Some(dt) = f.arg_types.get(pos).and_then(|t| self.datatype(t)) else {
            return false;
        };
        let covers_all = f.rules.iter().any(|r| r.lhs.args().get(pos).is_some_and(Term::is_var));
        !covers_all
            && dt.constructors.iter().any(|c| {
                !f.rules
                    .iter()
                    .any(|r| r.lhs.args().get(pos).is_some_and(|a| a.is_ctor() && a.head() == &c.name))
            })
    }

    /// Build a constructor application, checking arity and argument types.
    pub fn ctor_app(&self, name: &str, args: Vec<Term>) -> Result<Term, KernelError> {
        let (dt, c) = self.constructor(name).ok_or_else(|| KernelError::UnknownSymbol(name.to_string()))?;
        check_args(name, &c.args, &args)?;
        Ok(Term::Ctor { name: c.name.clone(), ty: dt.name.clone(), args })
    }

    /// Build a function application, checking arity and argument types.
    pub fn fun_app(&self, name: &str, args: Vec<Term>) -> Result<Term, KernelError> {
        let f = self.function(name).ok_or_else(|| KernelError::UnknownSymbol(name.to_string()))?;
        check_args(name, &f.arg_types, &args)?;
        Ok(Term::Fun { name: f.name.clone(), ty: f.result.clone(), args })
    }

    /// Checks arity and typing of every application in `t`.
    pub fn check_term(&self, t: &Term) -> Result<(), KernelError> {
        match t {
            Term::Var { ty, .. } => {
                self.datatype(ty).ok_or_else(|| KernelError::UnknownType(ty.to_string()))?;
            }
            Term::Ctor { name, ty, args } => {
                let (dt, c) =
                    self.constructor(name).ok_or_else(|| KernelError::UnknownSymbol(name.to_string()))?;
                if &dt.name != ty {
                    return Err(KernelError::TypeMismatch {
                        context: name.to_string(),
                        expected: dt.name.to_string(),
                        found: ty.to_string(),
                    });
                }
                check_args(name, &c.args, args)?;
            }
            Term::Fun { name, ty, args } => {
                let f = self.function(name).ok_or_else(|| KernelError::UnknownSymbol(name.to_string()))?;
                if &f.result != ty {
                    return Err(KernelError::TypeMismatch {
                        context: name.to_string(),
                        expected: f.result.to_string(),
                        found: ty.to_string(),
                    });
                }
                check_args(name, &f.arg_types, args)?;
            }
        }
        t.args().iter().try_for_each(|a| self.check_term(a))
    }
}

fn check_args(name: &str, expected: &[Sym], args: &[Term]) -> Result<(), KernelError> {
    if expected.len() != args.len() {
        return Err(KernelError::Arity { symbol: name.to_string(), expected: expected.len(), found: args.len() });
    }
    for (e, a) in expected.iter().zip(args) {
        if e != a.ty() {
            return Err(KernelError::TypeMismatch {
                context: name.to_string(),
                expected: e.to_string(),
                found: a.ty().to_string(),
            });
        }
    }
    Ok(())
}
