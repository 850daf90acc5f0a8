use std::fmt;

use crate::kernel::{sym, Goal, ProofState, Sym, Term, Theory};

use super::syntax::{lex, resolve, strip_comment, Cursor, Tok};
use super::CorpusError;

/// A universally quantified equation with an identifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjecture {
    pub id: String,
    /// Declared variables (name, datatype) in declaration order.
    pub vars: Vec<(Sym, Sym)>,
    pub lhs: Term,
    pub rhs: Term,
}

impl Conjecture {
    /// Declares exactly the variables occurring in the equation.
    pub fn from_equation(id: impl Into<String>, lhs: Term, rhs: Term) -> Self {
        let mut vars = lhs.vars();
        for v in rhs.vars() {
            if !vars.iter().any(|(n, _)| *n == v.0) {
                vars.push(v);
            }
        }
        Conjecture { id: id.into(), vars, lhs, rhs }
    }

    pub fn goal(&self) -> Goal {
        Goal::new(self.lhs.clone(), self.rhs.clone())
    }

    pub fn to_state(&self) -> ProofState {
        ProofState::single(self.goal())
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : ", self.id)?;
        if !self.vars.is_empty() {
            f.write_str("forall ")?;
            for (i, (n, t)) in self.vars.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{n}:{t}")?;
            }
            f.write_str(". ")?;
        }
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Parses one conjecture per line: `ID : forall x:nat, xs:list. TERM = TERM`.
/// The `forall ... .` prefix is omitted for ground equations.
pub fn parse_conjectures(text: &str, theory: &Theory) -> Result<Vec<Conjecture>, CorpusError> {
    let mut out: Vec<Conjecture> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line);
        let toks = lex(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, line_no, line.chars().count());
        let c = conjecture_line(&mut cur, theory, line_no)?;
        if out.iter().any(|p| p.id == c.id) {
            return Err(CorpusError::Duplicate { line: line_no, name: c.id });
        }
        out.push(c);
    }
    Ok(out)
}

fn conjecture_line(cur: &mut Cursor<'_>, theory: &Theory, line: usize) -> Result<Conjecture, CorpusError> {
    let (id, _) = cur.ident()?;
    cur.expect(&Tok::Colon)?;
    let mut vars: Vec<(Sym, Sym)> = Vec::new();
    if cur.peek() == Some(&Tok::Ident("forall".into())) {
        cur.ident()?;
        if !cur.eat(&Tok::Dot) {
            loop {
                let (name, _) = cur.ident()?;
                cur.expect(&Tok::Colon)?;
                let (ty, _) = cur.ident()?;
                if theory.datatype(&ty).is_none() {
                    return Err(CorpusError::Conjecture { id, msg: format!("unknown type `{ty}`") });
                }
                if vars.iter().any(|(n, _)| **n == *name) {
                    return Err(CorpusError::Conjecture { id, msg: format!("variable `{name}` declared twice") });
                }
                vars.push((sym(&name), sym(&ty)));
                if cur.eat(&Tok::Comma) {
                    continue;
                }
                cur.expect(&Tok::Dot)?;
                break;
            }
        }
    }
    let lhs_raw = cur.raw_term()?;
    cur.expect(&Tok::Eq)?;
    let rhs_raw = cur.raw_term()?;
    cur.finish()?;
    let name_error = |e: CorpusError| match e {
        CorpusError::UnboundVariable { name, .. } => {
            CorpusError::Conjecture { id: id.clone(), msg: format!("unbound variable `{name}`") }
        }
        CorpusError::Kernel { source, .. } => CorpusError::Conjecture { id: id.clone(), msg: source.to_string() },
        other => other,
    };
    let lhs = resolve(theory, &lhs_raw, &vars, line).map_err(name_error)?;
    let rhs = resolve(theory, &rhs_raw, &vars, line).map_err(name_error)?;
    if lhs.ty() != rhs.ty() {
        return Err(CorpusError::Conjecture {
            id,
            msg: format!("sides have different types: {} vs {}", lhs.ty(), rhs.ty()),
        });
    }
    Ok(Conjecture { id, vars, lhs, rhs })
}

/// Serializes conjectures, one per line.
pub fn write_conjectures(conjectures: &[Conjecture]) -> String {
    conjectures.iter().map(|c| format!("{c}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::default_theory;

    #[test]
    fn parses_quantified_equation() {
        let th = default_theory();
        let cs = parse_conjectures("g1 : forall n:nat. add(n, Zero) = n", &th).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].id, "g1");
        assert_eq!(cs[0].vars, vec![(sym("n"), sym("nat"))]);
        assert_eq!(cs[0].to_string(), "g1 : forall n:nat. add(n, Zero) = n");
    }

    #[test]
    fn undeclared_variable_names_the_conjecture() {
        let th = default_theory();
        let err = parse_conjectures("g2 : forall n:nat. add(n, m) = n", &th).unwrap_err();
        match err {
            CorpusError::Conjecture { id, msg } => {
                assert_eq!(id, "g2");
                assert!(msg.contains("unbound"), "{msg}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        assert!(parse_conjectures("", &default_theory()).unwrap().is_empty());
        assert!(parse_conjectures("# nothing\n\n", &default_theory()).unwrap().is_empty());
    }

    #[test]
    fn type_errors_name_the_conjecture() {
        let th = default_theory();
        let err = parse_conjectures("g3 : forall xs:list. len(xs) = xs", &th).unwrap_err();
        assert!(matches!(err, CorpusError::Conjecture { ref id, .. } if id == "g3"), "{err}");
        let err = parse_conjectures("g4 : forall n:nat. len(n) = n", &th).unwrap_err();
        assert!(matches!(err, CorpusError::Conjecture { ref id, .. } if id == "g4"), "{err}");
    }

    #[test]
    fn ground_form_and_syntax_errors() {
        let th = default_theory();
        let cs = parse_conjectures("z : Zero = Zero\nw : forall . Nil = Nil", &th).unwrap();
        assert_eq!(cs[0].to_string(), "z : Zero = Zero");
        assert_eq!(cs[1].to_string(), "w : Nil = Nil");
        assert!(matches!(
            parse_conjectures("g1 : forall n:nat add(n, Zero) = n", &th).unwrap_err(),
            CorpusError::Syntax { line: 1, .. }
        ));
        assert!(matches!(
            parse_conjectures("g1 : Zero = Zero\ng1 : Nil = Nil", &th).unwrap_err(),
            CorpusError::Duplicate { line: 2, .. }
        ));
    }

    #[test]
    fn print_parse_round_trip() {
        let th = default_theory();
        let text = "g1 : forall n:nat, xs:list. len(append(xs, Nil)) = len(xs)\ng2 : add(Suc(Zero), Zero) = Suc(Zero)\n";
        let cs = parse_conjectures(text, &th).unwrap();
        assert_eq!(write_conjectures(&cs), text);
    }
}
