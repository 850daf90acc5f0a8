//! Text form of method trees:
//!
//! ```text
//! (1, (10, expectation 0.0110944442872, expectation 0.00345987448177),
//!     (10, expectation 0.0510162518838, expectation 0.0102138733024))
//! ```
//!
//! The first inner node is the branch taken when the root assertion holds.
//! Output is always the single-line canonical form with shortest round-trip
//! floats.

use super::tree::{Branch, MethodTree, TreeBank};
use super::RecommendError;

pub fn serialize_tree(tree: &MethodTree) -> String {
    format!("({}, {}, {})", tree.root, node(&tree.on_true), node(&tree.on_false))
}

fn node(b: &Branch) -> String {
    format!("({}, expectation {}, expectation {})", b.assertion, b.if_true, b.if_false)
}

/// Parses a tree; the method name is supplied by the caller.
pub fn parse_tree(text: &str, method: &str) -> Result<MethodTree, RecommendError> {
    let mut p = Reader { chars: text.chars().collect(), pos: 0 };
    p.punct('(')?;
    let root = p.int()?;
    p.punct(',')?;
    let on_true = p.branch()?;
    p.punct(',')?;
    let on_false = p.branch()?;
    p.punct(')')?;
    p.ws();
    if p.pos < p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(MethodTree { method: method.to_string(), root, on_true, on_false })
}

struct Reader {
    chars: Vec<char>,
    pos: usize,
}

impl Reader {
    fn error(&self, msg: &str) -> RecommendError {
        RecommendError::Parse { position: self.pos + 1, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn punct(&mut self, c: char) -> Result<(), RecommendError> {
        self.ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn token(&mut self, accept: impl Fn(char) -> bool) -> String {
        self.ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| accept(*c)) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn int(&mut self) -> Result<usize, RecommendError> {
        let at = self.pos;
        let s = self.token(|c| c.is_ascii_digit());
        s.parse().map_err(|_| {
            self.pos = at;
            self.ws();
            self.error("expected assertion index")
        })
    }

    fn expectation(&mut self) -> Result<f64, RecommendError> {
        let word = self.token(|c| c.is_ascii_alphabetic());
        if word != "expectation" {
            return Err(self.error("expected `expectation`"));
        }
        self.ws();
        let at = self.pos;
        let s = self.token(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
        match s.parse::<f64>() {
            Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
            Ok(_) => {
                self.pos = at;
                Err(self.error("expectation outside [0, 1]"))
            }
            Err(_) => {
                self.pos = at;
                Err(self.error("expected number"))
            }
        }
    }

    fn branch(&mut self) -> Result<Branch, RecommendError> {
        self.punct('(')?;
        let assertion = self.int()?;
        self.punct(',')?;
        let if_true = self.expectation()?;
        self.punct(',')?;
        let if_false = self.expectation()?;
        self.punct(')')?;
        Ok(Branch { assertion, if_true, if_false })
    }
}

/// One line per tree: `method (root, ..., ...)`, sorted by method.
pub fn write_bank(bank: &TreeBank) -> String {
    bank.trees().iter().map(|t| format!("{} {}\n", t.method, serialize_tree(t))).collect()
}

pub fn parse_bank(text: &str) -> Result<TreeBank, RecommendError> {
    let mut trees = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (method, tree) = line
            .trim()
            .split_once(' ')
            .ok_or_else(|| RecommendError::BankLine { line: idx + 1, msg: "expected `method tree`".into() })?;
        let tree = parse_tree(tree, method)
            .map_err(|e| RecommendError::BankLine { line: idx + 1, msg: e.to_string() })?;
        trees.push(tree);
    }
    TreeBank::new(trees)
}
