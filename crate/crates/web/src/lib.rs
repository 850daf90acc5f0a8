//! Browser bindings for the evoprove workbench. Every export takes and
//! returns plain strings or numbers; results are JSON objects with either the
//! payload or an `error` field.

use evoprove::corpus::{default_theory, label_corpus, parse_conjectures, Conjecture};
use evoprove::evolve::{evolve_loop, EvolutionConfig, Workbench};
use evoprove::featurize::{AssertionRegistry, FeatureVector};
use evoprove::kernel::MethodName;
use evoprove::recommend::{eval_tree, parse_tree, train_bank};
use evoprove::strategy::{parse_strategy, run_strategy, Outcome, StrategyLibrary};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const SEPARABLE: &str = include_str!("../../core/data/separable.cnj");

fn to_json<T: Serialize>(value: &Result<T, String>) -> String {
    match value {
        Ok(v) => serde_json::to_string(v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(e),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

#[derive(Serialize)]
struct Routed {
    leaf: usize,
    expectation: f64,
}

/// Routes a 0/1 vector (`[1,0,...]` or `1,0,...`) through a method tree.
#[wasm_bindgen]
pub fn evaluate_tree(tree: &str, bits: &str) -> String {
    let run = || -> Result<Routed, String> {
        let t = parse_tree(tree, "tree").map_err(|e| e.to_string())?;
        let trimmed = bits.trim();
        let text = if trimmed.starts_with('[') { trimmed.to_string() } else { format!("[{trimmed}]") };
        let v: FeatureVector = text.parse().map_err(|e: evoprove::featurize::FeaturizeError| e.to_string())?;
        let (leaf, expectation) = eval_tree(&t, &v).map_err(|e| e.to_string())?;
        Ok(Routed { leaf, expectation })
    };
    to_json(&run())
}

#[derive(Serialize)]
struct ProofReport {
    conjecture: String,
    features: String,
    outcome: &'static str,
    trace: Vec<String>,
    used: usize,
}

/// Parses one conjecture line over the built-in theory and runs `strategy`.
#[wasm_bindgen]
pub fn prove(conjecture: &str, strategy: &str, budget: u32) -> String {
    let run = || -> Result<ProofReport, String> {
        let theory = default_theory();
        let line = if conjecture.contains(" : ") { conjecture.to_string() } else { format!("goal : {conjecture}") };
        let cs = parse_conjectures(&line, &theory).map_err(|e| e.to_string())?;
        let c = cs.first().ok_or("empty conjecture")?;
        let expr = parse_strategy(strategy).map_err(|e| e.to_string())?;
        let state = c.to_state();
        let features = AssertionRegistry::default().featurize(&state, &theory).map_err(|e| e.to_string())?;
        let res = run_strategy(&state, &expr, &theory, budget as usize);
        Ok(ProofReport {
            conjecture: c.to_string(),
            features: features.to_string(),
            outcome: match res.outcome {
                Outcome::Proved(_) => "proved",
                Outcome::Exhausted => "exhausted",
                Outcome::BudgetOut => "budget-out",
            },
            trace: res.outcome.trace().unwrap_or_default().iter().map(ToString::to_string).collect(),
            used: res.used,
        })
    };
    to_json(&run())
}

#[derive(Serialize)]
struct Baseline {
    strategy: String,
    fitness: usize,
}

#[derive(Serialize)]
struct Generation {
    generation: usize,
    best: usize,
    mean: f64,
}

#[derive(Serialize)]
struct EvolutionReport {
    corpus_size: usize,
    baselines: Vec<Baseline>,
    log: Vec<Generation>,
    best_fitness: usize,
    selector: String,
}

/// Labels, featurizes and trains on the built-in two-class corpus, then
/// evolves a selector with default settings.
#[wasm_bindgen]
pub fn evolve_demo(seed: u32, generations: u32) -> String {
    let run = || -> Result<EvolutionReport, String> {
        let theory = default_theory();
        let library = StrategyLibrary::default_library();
        let registry = AssertionRegistry::default();
        let cs = parse_conjectures(SEPARABLE, &theory).map_err(|e| e.to_string())?;
        let labels = label_corpus(&cs, &theory, 200);
        let mut training = Vec::new();
        for l in &labels.labels {
            let c = cs.iter().find(|c| c.id == l.id).ok_or("label without conjecture")?;
            let v = registry.featurize(&c.to_state(), &theory).map_err(|e| e.to_string())?;
            training.push((v, l.method.method.as_str().to_string()));
        }
        let methods: Vec<&str> = MethodName::ALL.iter().map(|m| m.as_str()).collect();
        let bank = train_bank(&training, &methods).map_err(|e| e.to_string())?;
        let cfg = EvolutionConfig { seed: u64::from(seed), generations: generations.max(1) as usize, workers: 1, ..Default::default() };
        let states: Vec<_> = cs.iter().map(Conjecture::to_state).collect();
        let baselines = library
            .iter()
            .map(|(name, e)| Baseline {
                strategy: name.to_string(),
                fitness: states.iter().filter(|s| run_strategy(s, e, &theory, cfg.budget).outcome.is_proved()).count(),
            })
            .collect();
        let wb = Workbench { theory: &theory, library: &library, bank: &bank, registry: &registry };
        let res = evolve_loop(&cfg, &states, &wb).map_err(|e| e.to_string())?;
        Ok(EvolutionReport {
            corpus_size: states.len(),
            baselines,
            log: res
                .log
                .iter()
                .map(|g| Generation { generation: g.generation, best: g.best_fitness, mean: g.mean_fitness })
                .collect(),
            best_fitness: res.best_fitness,
            selector: res.best.to_string(),
        })
    };
    to_json(&run())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREE: &str = "(1, (10, expectation 0.0110944442872, expectation 0.00345987448177), (10, expectation 0.0510162518838, expectation 0.0102138733024))";

    #[test]
    fn tree_routing() {
        let out: serde_json::Value = serde_json::from_str(&evaluate_tree(TREE, "0,0,0,0,0,0,0,0,0,0,1")).unwrap();
        assert_eq!(out["leaf"], 2);
        assert_eq!(out["expectation"], 0.0510162518838);
        let bad: serde_json::Value = serde_json::from_str(&evaluate_tree(TREE, "0,1")).unwrap();
        assert!(bad["error"].is_string());
    }

    #[test]
    fn proving() {
        let out: serde_json::Value =
            serde_json::from_str(&prove("forall n:nat. add(n, Zero) = n", "Thens [Dynamic(Induct), Auto]", 200)).unwrap();
        assert_eq!(out["outcome"], "proved");
        assert_eq!(out["trace"][0], "induct n");
        let bad: serde_json::Value = serde_json::from_str(&prove("add(n, Zero) = n", "Simp", 10)).unwrap();
        assert!(bad["error"].as_str().unwrap().contains("unbound"));
        let bad: serde_json::Value = serde_json::from_str(&prove("Zero = Zero", "Thens [Simp,", 10)).unwrap();
        assert!(bad["error"].is_string());
    }

    #[test]
    fn evolution_report() {
        let out: serde_json::Value = serde_json::from_str(&evolve_demo(42, 5)).unwrap();
        assert_eq!(out["corpus_size"], 60);
        assert_eq!(out["log"].as_array().unwrap().len(), 5);
        assert_eq!(out["baselines"].as_array().unwrap().len(), 4);
        let best = out["best_fitness"].as_u64().unwrap();
        assert!(out["baselines"].as_array().unwrap().iter().all(|b| b["fitness"].as_u64().unwrap() <= best));
    }
}
