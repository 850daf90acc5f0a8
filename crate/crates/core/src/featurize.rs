//! Assertions over proof obligations and their bit-vector encoding.

use std::fmt;
use std::str::FromStr;

use crate::kernel::{Goal, ProofState, Term, Theory};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FeaturizeError {
    #[error("cannot featurize an empty proof state")]
    EmptyState,
    #[error("registry size {requested} exceeds the {available} available assertions")]
    RegistrySize { requested: usize, available: usize },
    #[error("bad feature vector: {0}")]
    Parse(String),
    #[error("feature file line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

pub type Predicate = fn(&ProofState, &Theory) -> bool;

/// A named boolean probe of a proof state.
#[derive(Clone, Copy)]
pub struct Assertion {
    pub index: usize,
    pub name: &'static str,
    pub predicate: Predicate,
}

impl fmt::Debug for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}:{}", self.index, self.name)
    }
}

fn first(st: &ProofState) -> &Goal {
    &st.goals[0]
}

fn conclusion_terms(g: &Goal) -> impl Iterator<Item = &Term> {
    g.lhs.subterms().into_iter().chain(g.rhs.subterms())
}

fn has_var_of_type(st: &ProofState, ty: &str) -> bool {
    first(st).all_vars().iter().any(|(_, t)| &**t == ty)
}

fn repeated_var(t: &Term) -> bool {
    t.vars().iter().any(|(v, _)| t.occurrences(v) >= 2)
}

const CATALOG: [(&str, Predicate); 16] = [
    ("several_goals", |st, _| st.goals.len() > 1),
    ("lhs_head_defined", |st, _| first(st).lhs.is_fun()),
    ("rhs_head_defined", |st, _| first(st).rhs.is_fun()),
    ("has_nat_var", |st, _| has_var_of_type(st, "nat")),
    ("has_list_var", |st, _| has_var_of_type(st, "list")),
    ("var_in_recursion_position", |st, th| {
        conclusion_terms(first(st)).any(|t| match t {
            Term::Fun { name, args, .. } => th
                .function(name)
                .is_some_and(|f| args.get(f.recursion_position()).is_some_and(Term::is_var)),
            _ => false,
        })
    }),
    ("has_hypotheses", |st, _| !first(st).hypotheses.is_empty()),
    ("sides_equal", |st, _| first(st).lhs == first(st).rhs),
    ("lhs_deeper_than_3", |st, _| first(st).lhs.depth() > 3),
    ("lhs_two_vars", |st, _| first(st).lhs.vars().len() >= 2),
    ("ctor_under_function", |st, _| {
        conclusion_terms(first(st)).any(|t| t.is_fun() && t.args().iter().any(Term::is_ctor))
    }),
    ("var_on_both_sides", |st, _| {
        let g = first(st);
        g.lhs.vars().iter().any(|(v, _)| g.rhs.contains_var(v))
    }),
    ("same_head", |st, _| first(st).lhs.head() == first(st).rhs.head()),
    ("ground", |st, _| first(st).lhs.is_ground() && first(st).rhs.is_ground()),
    ("var_repeated_on_one_side", |st, _| repeated_var(&first(st).lhs) || repeated_var(&first(st).rhs)),
    ("partial_function", |st, th| {
        conclusion_terms(first(st)).any(|t| t.is_fun() && th.is_partial(t.head()))
    }),
];

/// Full assertion catalog, indices 0..16.
pub fn assertion_catalog() -> Vec<Assertion> {
    CATALOG.iter().enumerate().map(|(index, &(name, predicate))| Assertion { index, name, predicate }).collect()
}

/// The active assertions; featurization produces one bit per entry.
#[derive(Clone, Debug)]
pub struct AssertionRegistry {
    assertions: Vec<Assertion>,
}

impl Default for AssertionRegistry {
    fn default() -> Self {
        AssertionRegistry { assertions: assertion_catalog() }
    }
}

impl AssertionRegistry {
    /// The first `k` catalog assertions.
    pub fn with_size(k: usize) -> Result<Self, FeaturizeError> {
        let all = assertion_catalog();
        if k > all.len() {
            return Err(FeaturizeError::RegistrySize { requested: k, available: all.len() });
        }
        Ok(AssertionRegistry { assertions: all.into_iter().take(k).collect() })
    }

    pub fn len(&self) -> usize {
        self.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assertions.is_empty()
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn featurize(&self, state: &ProofState, theory: &Theory) -> Result<FeatureVector, FeaturizeError> {
        if state.goals.is_empty() {
            return Err(FeaturizeError::EmptyState);
        }
        Ok(FeatureVector::new(self.assertions.iter().map(|a| (a.predicate)(state, theory)).collect()))
    }
}

/// Featurize with the default registry.
pub fn featurize(state: &ProofState, theory: &Theory) -> Result<FeatureVector, FeaturizeError> {
    AssertionRegistry::default().featurize(state, theory)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FeatureVector {
    bits: Vec<bool>,
}

impl FeatureVector {
    pub fn new(bits: Vec<bool>) -> Self {
        FeatureVector { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// `[1,0,0,1,...]`
impl fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.bits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *b { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

impl FromStr for FeatureVector {
    type Err = FeaturizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| FeaturizeError::Parse(format!("expected bracketed list, got `{s}`")))?;
        if inner.trim().is_empty() {
            return Ok(FeatureVector::new(Vec::new()));
        }
        inner.split(',').map(|b| parse_bit(b.trim())).collect::<Result<_, _>>().map(FeatureVector::new)
    }
}

fn parse_bit(s: &str) -> Result<bool, FeaturizeError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(FeaturizeError::Parse(format!("expected 0 or 1, got `{other}`"))),
    }
}

/// Header `goal_id,a0,...,a{K-1}` then one 0/1 row per obligation.
pub fn write_feature_csv(k: usize, rows: &[(String, FeatureVector)]) -> String {
    let mut out = String::from("goal_id");
    for i in 0..k {
        out.push_str(&format!(",a{i}"));
    }
    out.push('\n');
    for (id, v) in rows {
        out.push_str(id);
        for b in v.bits() {
            out.push_str(if *b { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

pub fn parse_feature_csv(text: &str) -> Result<Vec<(String, FeatureVector)>, FeaturizeError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(FeaturizeError::Csv { line: 1, msg: "missing header".into() })?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first() != Some(&"goal_id") || cols[1..].iter().enumerate().any(|(i, c)| *c != format!("a{i}")) {
        return Err(FeaturizeError::Csv { line: 1, msg: format!("bad header `{header}`") });
    }
    let k = cols.len() - 1;
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let mut fields = line.split(',');
        let id = fields.next().unwrap_or_default().to_string();
        let bits = fields
            .map(|f| parse_bit(f.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FeaturizeError::Csv { line: idx + 1, msg: e.to_string() })?;
        if bits.len() != k {
            return Err(FeaturizeError::Csv { line: idx + 1, msg: format!("expected {k} bits, got {}", bits.len()) });
        }
        rows.push((id, FeatureVector::new(bits)));
    }
    Ok(rows)
}
