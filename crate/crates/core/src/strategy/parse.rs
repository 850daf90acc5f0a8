//! Recursive-descent reader for the strategy syntax.
//!
//! ```text
//! Expr     := Method | "Dynamic" "(" DynName ")"
//!           | "Thens" "[" Expr ("," Expr)* "]" | "Ors" "[" Expr ("," Expr)* "]"
//!           | "Repeat" "(" Expr ")" | "Try" "(" Expr ")"
//! Method   := "Refl" | "Simp" | "Auto" | "Hyp" | "Induct" Ident | "Cases" Ident
//! DynName  := "Induct" | "Cases"
//! ```

use crate::kernel::MethodInstance;

use super::ast::{method_from_keyword, StrategyExpr};
use super::StrategyError;

pub fn parse_strategy(text: &str) -> Result<StrategyExpr, StrategyError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    /// 1-based position of the next unread character (len + 1 at end of input).
    fn position(&self) -> usize {
        self.pos + 1
    }

    fn syntax(&self, msg: &str) -> StrategyError {
        StrategyError::Syntax { position: self.position(), msg: msg.to_string() }
    }

    fn word(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        (self.pos > start).then(|| (self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn punct(&mut self, c: char) -> Result<(), StrategyError> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else if self.pos >= self.chars.len() {
            Err(self.syntax(&format!("expected `{c}`, found end of input")))
        } else {
            Err(self.syntax(&format!("expected `{c}`")))
        }
    }

    fn peek_punct(&mut self, c: char) -> bool {
        self.skip_ws();
        self.chars.get(self.pos) == Some(&c)
    }

    fn expr(&mut self) -> Result<StrategyExpr, StrategyError> {
        let Some((word, at)) = self.word() else {
            return Err(if self.pos >= self.chars.len() {
                self.syntax("expected strategy, found end of input")
            } else {
                self.syntax("expected strategy")
            });
        };
        match word.as_str() {
            "Thens" => Ok(StrategyExpr::Thens(self.list()?)),
            "Ors" => Ok(StrategyExpr::Ors(self.list()?)),
            "Repeat" => Ok(StrategyExpr::repeat(self.paren_expr()?)),
            "Try" => Ok(StrategyExpr::try_(self.paren_expr()?)),
            "Dynamic" => {
                self.punct('(')?;
                let (name, at) = self.word().ok_or_else(|| self.syntax("expected `Induct` or `Cases`"))?;
                let m = match method_from_keyword(&name) {
                    Some(m) if m.takes_variable() => m,
                    Some(_) => return Err(StrategyError::NotDynamic { position: at, name }),
                    None => return Err(StrategyError::UnknownMethod { position: at, name }),
                };
                self.punct(')')?;
                Ok(StrategyExpr::Dynamic(m))
            }
            other => {
                let m = method_from_keyword(other)
                    .ok_or_else(|| StrategyError::UnknownMethod { position: at, name: other.to_string() })?;
                if m.takes_variable() {
                    let (var, _) = self.word().ok_or_else(|| self.syntax("expected variable name"))?;
                    Ok(StrategyExpr::Atom(MethodInstance::on(m, &var).expect("variable-taking method")))
                } else {
                    Ok(StrategyExpr::Atom(MethodInstance::simple(m).expect("plain method")))
                }
            }
        }
    }

    fn paren_expr(&mut self) -> Result<StrategyExpr, StrategyError> {
        self.punct('(')?;
        let e = self.expr()?;
        self.punct(')')?;
        Ok(e)
    }

    fn list(&mut self) -> Result<Vec<StrategyExpr>, StrategyError> {
        self.punct('[')?;
        let mut items = vec![self.expr()?];
        while self.peek_punct(',') {
            self.pos += 1;
            items.push(self.expr()?);
        }
        self.punct(']')?;
        Ok(items)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::MethodName;

    #[test]
    fn thens_with_dynamic() {
        let e = parse_strategy("Thens [Dynamic(Induct), Auto]").unwrap();
        assert_eq!(
            e,
            StrategyExpr::Thens(vec![
                StrategyExpr::Dynamic(MethodName::Induct),
                StrategyExpr::Atom(MethodInstance::auto())
            ])
        );
    }

    #[test]
    fn repeat_simp() {
        assert_eq!(parse_strategy("Repeat(Simp)").unwrap(), StrategyExpr::repeat(StrategyExpr::Atom(MethodInstance::simp())));
    }

    #[test]
    fn truncated_input_reports_end_position() {
        let err = parse_strategy("Thens [Simp,").unwrap_err();
        assert!(matches!(err, StrategyError::Syntax { position: 13, .. }), "{err}");
    }

    #[test]
    fn unknown_method_is_reported_with_position() {
        let err = parse_strategy("Ors [Simp, Blast]").unwrap_err();
        assert_eq!(err, StrategyError::UnknownMethod { position: 12, name: "Blast".into() });
        let err = parse_strategy("Dynamic(Simp)").unwrap_err();
        assert!(matches!(err, StrategyError::NotDynamic { position: 9, .. }));
    }

    #[test]
    fn explicit_targets_and_whitespace() {
        let e = parse_strategy("  Ors[ Induct n ,Cases xs,Try ( Hyp ) ]  ").unwrap();
        assert_eq!(e.to_string(), "Ors [Induct n, Cases xs, Try(Hyp)]");
        assert!(parse_strategy("Induct").is_err());
        assert!(parse_strategy("Thens []").is_err());
        assert!(parse_strategy("Simp Simp").is_err());
    }
}
