use std::collections::HashMap;
use std::fmt;

use crate::kernel::{sym, Constructor, Datatype, Function, RewriteRule, Sym, Theory};

use super::syntax::{lex, strip_comment, Cursor, Raw, Tok};
use super::CorpusError;

const DEFAULT_THEORY: &str = include_str!("../../data/default.thy");

/// The shipped theory: `nat`, `list` and the functions `add`, `mul`,
/// `append`, `rev`, `len`, `double`, `pred`.
pub fn default_theory() -> Theory {
    parse_theory(DEFAULT_THEORY).expect("shipped theory parses")
}

pub fn default_theory_text() -> &'static str {
    DEFAULT_THEORY
}

struct FunDecl {
    name: String,
    line: usize,
    rules: Vec<(Raw, Raw)>,
}

/// Parses `datatype` and `fun` lines. Function signatures are inferred from
/// the rules.
pub fn parse_theory(text: &str) -> Result<Theory, CorpusError> {
    let mut datatypes: Vec<(Datatype, usize)> = Vec::new();
    let mut funs: Vec<FunDecl> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line);
        let toks = lex(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, line_no, line.chars().count());
        let (kw, _) = cur.ident()?;
        match kw.as_str() {
            "datatype" => datatypes.push((datatype_line(&mut cur)?, line_no)),
            "fun" => funs.push(fun_line(&mut cur, line_no)?),
            other => {
                return Err(CorpusError::Syntax {
                    line: line_no,
                    col: 1,
                    msg: format!("expected `datatype` or `fun`, found `{other}`"),
                })
            }
        }
    }

    // Datatype-level checks first, so errors point at the right line.
    let dts: Vec<Datatype> = datatypes.iter().map(|(d, _)| d.clone()).collect();
    for (i, (d, line)) in datatypes.iter().enumerate() {
        let dup_type = dts[..i].iter().any(|p| p.name == d.name);
        let dup_ctor = d.constructors.iter().enumerate().find(|(ci, c)| {
            dts[..i].iter().flat_map(|p| &p.constructors).any(|p| p.name == c.name)
                || d.constructors[..*ci].iter().any(|p| p.name == c.name)
        });
        if dup_type {
            return Err(CorpusError::Duplicate { line: *line, name: d.name.to_string() });
        }
        if let Some((_, c)) = dup_ctor {
            return Err(CorpusError::Duplicate { line: *line, name: c.name.to_string() });
        }
        for c in &d.constructors {
            if let Some(t) = c.args.iter().find(|t| !dts.iter().any(|x| x.name == **t)) {
                return Err(CorpusError::Type { line: *line, msg: format!("unknown type `{t}`") });
            }
        }
    }
    for (i, f) in funs.iter().enumerate() {
        if funs[..i].iter().any(|p| p.name == f.name) || dts.iter().flat_map(|d| &d.constructors).any(|c| *c.name == *f.name)
        {
            return Err(CorpusError::Duplicate { line: f.line, name: f.name.clone() });
        }
    }

    let functions = infer_signatures(&dts, &funs)?;
    let shell = Theory::new(dts.clone(), functions.iter().map(|(f, _)| f.clone()).collect())
        .map_err(|e| CorpusError::Kernel { line: 0, source: e })?;

    // Second pass: build typed rules now that signatures are known.
    let mut typed = Vec::with_capacity(funs.len());
    for ((sig, var_types), decl) in functions.into_iter().zip(&funs) {
        let mut rules = Vec::with_capacity(decl.rules.len());
        for ((lhs, rhs), scope) in decl.rules.iter().zip(var_types) {
            let l = super::syntax::resolve(&shell, lhs, &scope, decl.line)?;
            let r = super::syntax::resolve(&shell, rhs, &scope, decl.line)?;
            rules.push(RewriteRule::schematic(l, r).map_err(|e| CorpusError::Kernel { line: decl.line, source: e })?);
        }
        typed.push(Function { rules, ..sig });
    }
    Theory::new(dts, typed).map_err(|e| CorpusError::Kernel { line: 0, source: e })
}

fn datatype_line(cur: &mut Cursor<'_>) -> Result<Datatype, CorpusError> {
    let (name, _) = cur.ident()?;
    cur.expect(&Tok::Eq)?;
    let mut constructors = Vec::new();
    loop {
        let (ctor, _) = cur.ident()?;
        let mut args = Vec::new();
        while let Some(Tok::Ident(_)) = cur.peek() {
            args.push(sym(&cur.ident()?.0));
        }
        constructors.push(Constructor { name: sym(&ctor), args });
        if cur.eat(&Tok::Pipe) {
            continue;
        }
        cur.finish()?;
        break;
    }
    Ok(Datatype { name: sym(&name), constructors })
}

fn fun_line(cur: &mut Cursor<'_>, line: usize) -> Result<FunDecl, CorpusError> {
    let (name, _) = cur.ident()?;
    cur.expect(&Tok::Colon)?;
    let mut rules = Vec::new();
    loop {
        let lhs = cur.raw_term()?;
        cur.expect(&Tok::Arrow)?;
        let rhs = cur.raw_term()?;
        rules.push((lhs, rhs));
        if cur.eat(&Tok::Semi) {
            continue;
        }
        cur.finish()?;
        break;
    }
    Ok(FunDecl { name, line, rules })
}

/// Union-find over type slots; each class may be pinned to a datatype.
#[derive(Default)]
struct Unifier {
    parent: Vec<usize>,
    pinned: Vec<Option<Sym>>,
}

impl Unifier {
    fn fresh(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.pinned.push(None);
        self.parent.len() - 1
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn pin(&mut self, a: usize, ty: &Sym) -> Result<(), (Sym, Sym)> {
        let r = self.find(a);
        match &self.pinned[r] {
            Some(t) if t != ty => Err((t.clone(), ty.clone())),
            _ => {
                self.pinned[r] = Some(ty.clone());
                Ok(())
            }
        }
    }

    fn union(&mut self, a: usize, b: usize) -> Result<(), (Sym, Sym)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(());
        }
        match (self.pinned[ra].clone(), self.pinned[rb].clone()) {
            (Some(x), Some(y)) if x != y => return Err((x, y)),
            (None, Some(y)) => self.pinned[ra] = Some(y),
            _ => {}
        }
        self.parent[rb] = ra;
        Ok(())
    }

    fn resolved(&mut self, a: usize) -> Option<Sym> {
        let r = self.find(a);
        self.pinned[r].clone()
    }
}

struct Sig {
    args: Vec<usize>,
    result: usize,
}

type RuleScope = Vec<(Sym, Sym)>;

fn infer_signatures(dts: &[Datatype], funs: &[FunDecl]) -> Result<Vec<(Function, Vec<RuleScope>)>, CorpusError> {
    let mut u = Unifier::default();
    let ctor_sig: HashMap<&str, (&Datatype, &Constructor)> =
        dts.iter().flat_map(|d| d.constructors.iter().map(move |c| (&*c.name, (d, c)))).collect();

    let mut sigs: HashMap<&str, Sig> = HashMap::new();
    for f in funs {
        let (lhs, _) = &f.rules[0];
        let args = (0..lhs.args.len()).map(|_| u.fresh()).collect();
        let result = u.fresh();
        sigs.insert(&f.name, Sig { args, result });
    }

    let mut scopes: Vec<Vec<Vec<(String, usize)>>> = Vec::new();
    for f in funs {
        let mut per_rule = Vec::new();
        for (lhs, rhs) in &f.rules {
            if lhs.name != f.name {
                return Err(CorpusError::Type {
                    line: f.line,
                    msg: format!("rule head `{}` does not match function `{}`", lhs.name, f.name),
                });
            }
            let mut vars: Vec<(String, usize)> = Vec::new();
            let mut cx = InferCx { u: &mut u, ctors: &ctor_sig, sigs: &sigs, line: f.line };
            let lt = cx.infer(lhs, &mut vars, true)?;
            let rt = cx.infer(rhs, &mut vars, false)?;
            cx.u.union(lt, rt).map_err(|(a, b)| type_clash(f.line, &a, &b))?;
            per_rule.push(vars);
        }
        scopes.push(per_rule);
    }

    let mut out = Vec::with_capacity(funs.len());
    for (f, rule_vars) in funs.iter().zip(scopes) {
        let sig = &sigs[f.name.as_str()];
        let mut arg_types = Vec::with_capacity(sig.args.len());
        for (i, &a) in sig.args.iter().enumerate() {
            arg_types.push(u.resolved(a).ok_or_else(|| CorpusError::Type {
                line: f.line,
                msg: format!("cannot infer type of argument {} of `{}`", i + 1, f.name),
            })?);
        }
        let result = u.resolved(sig.result).ok_or_else(|| CorpusError::Type {
            line: f.line,
            msg: format!("cannot infer result type of `{}`", f.name),
        })?;
        let mut typed_scopes = Vec::new();
        for vars in rule_vars {
            let mut scope = Vec::new();
            for (name, slot) in vars {
                let ty = u.resolved(slot).ok_or_else(|| CorpusError::Type {
                    line: f.line,
                    msg: format!("cannot infer type of variable `{name}`"),
                })?;
                scope.push((sym(&name), ty));
            }
            typed_scopes.push(scope);
        }
        out.push((Function { name: sym(&f.name), arg_types, result, rules: Vec::new() }, typed_scopes));
    }
    Ok(out)
}

fn type_clash(line: usize, a: &Sym, b: &Sym) -> CorpusError {
    CorpusError::Type { line, msg: format!("type mismatch: {a} vs {b}") }
}

struct InferCx<'a, 'b> {
    u: &'a mut Unifier,
    ctors: &'a HashMap<&'b str, (&'b Datatype, &'b Constructor)>,
    sigs: &'a HashMap<&'b str, Sig>,
    line: usize,
}

impl InferCx<'_, '_> {
    fn infer(&mut self, raw: &Raw, vars: &mut Vec<(String, usize)>, binding: bool) -> Result<usize, CorpusError> {
        let line = self.line;
        let arity_err = |expected: usize| CorpusError::Type {
            line,
            msg: format!("`{}` expects {expected} argument(s), got {}", raw.name, raw.args.len()),
        };
        if let Some(&(dt, c)) = self.ctors.get(raw.name.as_str()) {
            if c.args.len() != raw.args.len() {
                return Err(arity_err(c.args.len()));
            }
            for (a, ty) in raw.args.iter().zip(&c.args) {
                let slot = self.infer(a, vars, binding)?;
                self.u.pin(slot, ty).map_err(|(x, y)| type_clash(line, &x, &y))?;
            }
            let me = self.u.fresh();
            self.u.pin(me, &dt.name).map_err(|(x, y)| type_clash(line, &x, &y))?;
            return Ok(me);
        }
        if let Some(sig) = self.sigs.get(raw.name.as_str()) {
            if sig.args.len() != raw.args.len() {
                return Err(arity_err(sig.args.len()));
            }
            let (arg_slots, result) = (sig.args.clone(), sig.result);
            for (a, slot) in raw.args.iter().zip(arg_slots) {
                let s = self.infer(a, vars, binding)?;
                self.u.union(s, slot).map_err(|(x, y)| type_clash(line, &x, &y))?;
            }
            return Ok(result);
        }
        if !raw.args.is_empty() {
            return Err(CorpusError::Syntax { line, col: raw.col, msg: format!("unknown symbol `{}`", raw.name) });
        }
        if let Some((_, slot)) = vars.iter().find(|(n, _)| *n == raw.name) {
            return Ok(*slot);
        }
        if !binding {
            return Err(CorpusError::UnboundVariable { line, name: raw.name.clone() });
        }
        let slot = self.u.fresh();
        vars.push((raw.name.clone(), slot));
        Ok(slot)
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.datatypes {
            write!(f, "datatype {} =", d.name)?;
            for (i, c) in d.constructors.iter().enumerate() {
                if i > 0 {
                    f.write_str(" |")?;
                }
                write!(f, " {}", c.name)?;
                for a in &c.args {
                    write!(f, " {a}")?;
                }
            }
            writeln!(f)?;
        }
        for func in &self.functions {
            write!(f, "fun {}:", func.name)?;
            for (i, r) in func.rules.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ;")?;
                }
                write!(f, " {r}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
