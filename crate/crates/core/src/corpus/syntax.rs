//! Shared lexer and term reader for theory and conjecture files.

use crate::kernel::{Sym, Term, Theory};

use super::CorpusError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Arrow,
    Eq,
    Colon,
    Semi,
    Pipe,
    Dot,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Dot => "`.`".into(),
        }
    }
}

/// Strips a `#` comment.
pub(crate) fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code)
}

/// Tokenizes one line. Columns are 1-based character positions.
pub(crate) fn lex(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, CorpusError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            '|' => Tok::Pipe,
            '.' => Tok::Dot,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => {
                return Err(CorpusError::Syntax { line: line_no, col, msg: format!("unexpected character `{other}`") })
            }
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

/// Cursor over one line's tokens.
pub(crate) struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(toks: &'a [(Tok, usize)], line: usize, line_len: usize) -> Self {
        Cursor { toks, pos: 0, line, end_col: line_len + 1 }
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub(crate) fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> CorpusError {
        CorpusError::Syntax { line: self.line, col: self.col(), msg: msg.into() }
    }

    fn unexpected(&self, wanted: &str) -> CorpusError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), CorpusError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<(String, usize), CorpusError> {
        match self.toks.get(self.pos) {
            Some((Tok::Ident(s), col)) => {
                self.pos += 1;
                Ok((s.clone(), *col))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), CorpusError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    /// `Ident ( "(" Raw ("," Raw)* ")" )?`
    pub(crate) fn raw_term(&mut self) -> Result<Raw, CorpusError> {
        let (name, col) = self.ident()?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.raw_term()?);
                if self.eat(&Tok::Comma) {
                    continue;
                }
                self.expect(&Tok::RParen)?;
                break;
            }
        }
        Ok(Raw { name, args, col })
    }
}

/// Untyped parse tree of a term.
#[derive(Clone, Debug)]
pub(crate) struct Raw {
    pub name: String,
    pub args: Vec<Raw>,
    pub col: usize,
}

/// Resolves a raw term against `theory`, with `scope` giving variable types.
pub(crate) fn resolve(
    theory: &Theory,
    raw: &Raw,
    scope: &[(Sym, Sym)],
    line: usize,
) -> Result<Term, CorpusError> {
    let args = raw.args.iter().map(|a| resolve(theory, a, scope, line)).collect::<Result<Vec<_>, _>>()?;
    let at = |e| CorpusError::Kernel { line, source: e };
    if theory.constructor(&raw.name).is_some() {
        return theory.ctor_app(&raw.name, args).map_err(at);
    }
    if theory.function(&raw.name).is_some() {
        return theory.fun_app(&raw.name, args).map_err(at);
    }
    if !args.is_empty() {
        return Err(CorpusError::Syntax { line, col: raw.col, msg: format!("unknown symbol `{}`", raw.name) });
    }
    match scope.iter().find(|(n, _)| **n == *raw.name) {
        Some((n, ty)) => Ok(Term::Var { name: n.clone(), ty: ty.clone() }),
        None => Err(CorpusError::UnboundVariable { line, name: raw.name.clone() }),
    }
}

/// Parses a standalone term with the given variable typing.
pub fn parse_term_in(theory: &Theory, text: &str, vars: &[(&str, &str)]) -> Result<Term, CorpusError> {
    let toks = lex(text, 1)?;
    let mut cur = Cursor::new(&toks, 1, text.chars().count());
    let raw = cur.raw_term()?;
    cur.finish()?;
    let scope: Vec<(Sym, Sym)> = vars.iter().map(|(n, t)| (Sym::from(*n), Sym::from(*t))).collect();
    resolve(theory, &raw, &scope, 1)
}
