use std::fmt::Write as _;

use rayon::prelude::*;

use crate::kernel::{apply_method, MethodInstance, MethodName, Theory, DEFAULT_STEP_CAP};
use crate::strategy::{run_strategy, StrategyExpr};

use super::{Conjecture, CorpusError};

/// The first method recorded for a conjecture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    pub id: String,
    pub method: MethodInstance,
}

/// `Thens [Auto, Try(Thens [Dynamic(Induct), Auto])]`
pub fn finishing_strategy() -> StrategyExpr {
    let auto = StrategyExpr::atom(MethodInstance::auto());
    StrategyExpr::Thens(vec![
        auto.clone(),
        StrategyExpr::try_(StrategyExpr::Thens(vec![StrategyExpr::Dynamic(MethodName::Induct), auto])),
    ])
}

fn candidates(c: &Conjecture) -> Vec<MethodInstance> {
    let vars = c.goal().conclusion_vars();
    let mut out = vec![MethodInstance::simp()];
    out.extend(vars.iter().map(|(v, _)| MethodInstance::induct(v)));
    out.extend(vars.iter().map(|(v, _)| MethodInstance::cases(v)));
    out.extend([MethodInstance::auto(), MethodInstance::refl(), MethodInstance::hyp()]);
    out
}

/// First candidate that, followed by the finishing strategy, proves `c`
/// within `budget` method applications (the candidate itself costs one).
pub fn label_conjecture(c: &Conjecture, theory: &Theory, budget: usize) -> Option<MethodInstance> {
    if budget == 0 {
        return None;
    }
    let start = c.to_state();
    let finish = finishing_strategy();
    candidates(c).into_iter().find(|m| {
        apply_method(&start, m, theory, DEFAULT_STEP_CAP)
            .first()
            .is_some_and(|next| next.is_proved() || run_strategy(next, &finish, theory, budget - 1).outcome.is_proved())
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelling {
    pub labels: Vec<Label>,
    /// Ids of conjectures no candidate could start.
    pub dropped: Vec<String>,
}

pub fn label_corpus(conjectures: &[Conjecture], theory: &Theory, budget: usize) -> Labelling {
    let found: Vec<Option<MethodInstance>> =
        conjectures.par_iter().map(|c| label_conjecture(c, theory, budget)).collect();
    let mut out = Labelling { labels: Vec::new(), dropped: Vec::new() };
    for (c, m) in conjectures.iter().zip(found) {
        match m {
            Some(method) => out.labels.push(Label { id: c.id.clone(), method }),
            None => out.dropped.push(c.id.clone()),
        }
    }
    out
}

/// CSV `id,method`; the method column holds the bare method name.
pub fn write_labels(labels: &[Label]) -> String {
    let mut out = String::from("id,method\n");
    for l in labels {
        let _ = writeln!(out, "{},{}", l.id, l.method.method);
    }
    out
}

/// Reads `id,method` rows; a leading header row is optional.
pub fn parse_labels(text: &str) -> Result<Vec<(String, MethodName)>, CorpusError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (idx == 0 && line == "id,method") {
            continue;
        }
        let bad = |msg: String| CorpusError::Label { line: idx + 1, msg };
        let (id, m) = line.split_once(',').ok_or_else(|| bad("expected `id,method`".into()))?;
        let m: MethodName = m.trim().parse().map_err(|_| bad(format!("unknown method `{}`", m.trim())))?;
        if out.iter().any(|(x, _)| x == id.trim()) {
            return Err(bad(format!("duplicate id `{}`", id.trim())));
        }
        out.push((id.trim().to_string(), m));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{default_theory, parse_conjectures};

    fn label_of(text: &str) -> Option<MethodInstance> {
        let th = default_theory();
        let c = &parse_conjectures(text, &th).unwrap()[0];
        label_conjecture(c, &th, 200)
    }

    #[test]
    fn oracle_labels() {
        assert_eq!(label_of("a : forall n:nat. add(Zero, n) = n"), Some(MethodInstance::simp()));
        assert_eq!(label_of("b : forall n:nat. add(n, Zero) = n"), Some(MethodInstance::induct("n")));
        assert_eq!(label_of("c : Zero = Zero"), Some(MethodInstance::simp()));
    }

    #[test]
    fn unprovable_goals_are_dropped() {
        let th = default_theory();
        let cs = parse_conjectures("a : forall n:nat. add(Zero, n) = n\nz : forall n:nat. add(n, n) = n", &th).unwrap();
        let l = label_corpus(&cs, &th, 200);
        assert_eq!(l.labels.len(), 1);
        assert_eq!(l.dropped, vec!["z".to_string()]);
        assert!(label_corpus(&cs, &th, 0).labels.is_empty());
    }

    #[test]
    fn label_csv_round_trip() {
        let labels = vec![
            Label { id: "g1".into(), method: MethodInstance::simp() },
            Label { id: "g2".into(), method: MethodInstance::induct("n") },
        ];
        let text = write_labels(&labels);
        assert_eq!(text, "id,method\ng1,simp\ng2,induct\n");
        assert_eq!(
            parse_labels(&text).unwrap(),
            vec![("g1".to_string(), MethodName::Simp), ("g2".to_string(), MethodName::Induct)]
        );
        assert!(matches!(parse_labels("g1,blast\n"), Err(CorpusError::Label { line: 1, .. })));
        assert!(parse_labels("g1,simp\ng1,auto\n").is_err());
    }
}
