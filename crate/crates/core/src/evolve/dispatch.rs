use rayon::prelude::*;

use crate::featurize::{AssertionRegistry, FeatureVector};
use crate::kernel::{ProofState, Theory};
use crate::recommend::TreeBank;
use crate::strategy::{run_strategy, Outcome, StrategyLibrary};

use super::genome::Selector;
use super::EvolveError;

/// Everything dispatch needs besides the selector itself.
#[derive(Clone, Copy)]
pub struct Workbench<'a> {
    pub theory: &'a Theory,
    pub library: &'a StrategyLibrary,
    pub bank: &'a TreeBank,
    pub registry: &'a AssertionRegistry,
}

/// Global leaf index `4·t + ℓ` for every tree t in the bank.
pub fn active_leaves(bank: &TreeBank, v: &FeatureVector) -> Result<Vec<usize>, EvolveError> {
    bank.trees()
        .iter()
        .enumerate()
        .map(|(t, tree)| tree.eval(v).map(|(leaf, _)| 4 * t + leaf).map_err(EvolveError::from))
        .collect()
}

/// Index of the strategy whose genome sums highest over `active`; the
/// earliest strategy wins ties.
pub fn select_strategy(sel: &Selector, active: &[usize]) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..sel.len() {
        let genes = sel.genome(i).genes();
        let score: f64 = active.iter().map(|&a| genes[a]).sum();
        if score > best.1 {
            best = (i, score);
        }
    }
    best.0
}

fn check_lengths(sel: &Selector, wb: &Workbench<'_>) -> Result<(), EvolveError> {
    if sel.genome_len() != wb.bank.leaf_count() {
        return Err(EvolveError::LengthMismatch { genome: sel.genome_len(), leaves: wb.bank.leaf_count() });
    }
    if sel.len() != wb.library.len() || !sel.names().eq(wb.library.names()) {
        return Err(EvolveError::StrategyMismatch);
    }
    Ok(())
}

/// Per-obligation dispatch result.
#[derive(Clone, Debug, PartialEq)]
pub struct Dispatch {
    pub strategy: usize,
    pub outcome: Outcome,
    pub used: usize,
}

/// Featurize, route, pick a strategy and run it on one obligation.
pub fn dispatch(sel: &Selector, state: &ProofState, wb: &Workbench<'_>, budget: usize) -> Result<Dispatch, EvolveError> {
    check_lengths(sel, wb)?;
    let v = wb.registry.featurize(state, wb.theory)?;
    let strategy = select_strategy(sel, &active_leaves(wb.bank, &v)?);
    let run = run_strategy(state, wb.library.expr(strategy), wb.theory, budget);
    Ok(Dispatch { strategy, outcome: run.outcome, used: run.used })
}

/// Number of obligations the selector's dispatch discharges within `budget`.
pub fn fitness(sel: &Selector, corpus: &[ProofState], wb: &Workbench<'_>, budget: usize) -> Result<usize, EvolveError> {
    if corpus.is_empty() {
        return Err(EvolveError::EmptyCorpus);
    }
    let mut proved = 0;
    for st in corpus {
        if dispatch(sel, st, wb, budget)?.outcome.is_proved() {
            proved += 1;
        }
    }
    Ok(proved)
}

/// Precomputed routing and per-strategy outcomes for a fixed corpus.
///
/// Strategy outcomes do not depend on the selector, so a selector's fitness
/// reduces to table lookups once every (obligation, strategy) pair has run.
#[derive(Clone, Debug)]
pub struct FitnessTable {
    active: Vec<Vec<usize>>,
    outcomes: Vec<Vec<Outcome>>,
    leaves: usize,
}

impl FitnessTable {
    /// Runs every library strategy on every obligation. `workers = 0` uses
    /// the default thread count; results do not depend on it.
    pub fn build(corpus: &[ProofState], wb: &Workbench<'_>, budget: usize, workers: usize) -> Result<Self, EvolveError> {
        if corpus.is_empty() {
            return Err(EvolveError::EmptyCorpus);
        }
        if wb.library.is_empty() {
            return Err(EvolveError::EmptyLibrary);
        }
        let active = corpus
            .iter()
            .map(|st| wb.registry.featurize(st, wb.theory).map_err(EvolveError::from).and_then(|v| active_leaves(wb.bank, &v)))
            .collect::<Result<Vec<_>, _>>()?;
        let pairs: Vec<(usize, usize)> =
            (0..corpus.len()).flat_map(|g| (0..wb.library.len()).map(move |s| (g, s))).collect();
        let run = || -> Vec<Outcome> {
            pairs
                .par_iter()
                .map(|&(g, s)| run_strategy(&corpus[g], wb.library.expr(s), wb.theory, budget).outcome)
                .collect()
        };
        let flat = with_workers(workers, run);
        let outcomes = flat.chunks(wb.library.len()).map(<[Outcome]>::to_vec).collect();
        Ok(FitnessTable { active, outcomes, leaves: wb.bank.leaf_count() })
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn active(&self, goal: usize) -> &[usize] {
        &self.active[goal]
    }

    pub fn outcome(&self, goal: usize, strategy: usize) -> &Outcome {
        &self.outcomes[goal][strategy]
    }

    pub fn strategies(&self) -> usize {
        self.outcomes.first().map_or(0, Vec::len)
    }

    pub fn genome_len(&self) -> usize {
        self.leaves
    }

    pub fn fitness(&self, sel: &Selector) -> usize {
        (0..self.len()).filter(|&g| self.outcomes[g][select_strategy(sel, &self.active[g])].is_proved()).count()
    }

    /// Fitness of always running strategy `s`.
    pub fn baseline(&self, s: usize) -> usize {
        self.outcomes.iter().filter(|o| o[s].is_proved()).count()
    }
}

/// Runs `f` on a pool with `workers` threads (0 = rayon default). Where
/// threads cannot be spawned `f` runs on the global pool instead.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::Genome;
    use crate::recommend::{Branch, MethodTree};

    fn tree(method: &str, root: usize, child: usize) -> MethodTree {
        MethodTree {
            method: method.into(),
            root,
            on_true: Branch { assertion: child, if_true: 0.1, if_false: 0.2 },
            on_false: Branch { assertion: child, if_true: 0.3, if_false: 0.4 },
        }
    }

    fn fv(bits: &[u8]) -> FeatureVector {
        FeatureVector::new(bits.iter().map(|b| *b == 1).collect())
    }

    #[test]
    fn active_leaf_single_tree() {
        let bank = TreeBank::new(vec![tree("a", 0, 1)]).unwrap();
        assert_eq!(active_leaves(&bank, &fv(&[0, 1])).unwrap(), vec![2]);
    }

    #[test]
    fn active_leaves_three_trees() {
        // local leaves (0, 3, 1) → {0, 7, 9}
        let bank = TreeBank::new(vec![tree("a", 0, 1), tree("b", 2, 3), tree("c", 0, 3)]).unwrap();
        let v = fv(&[1, 1, 0, 0]);
        assert_eq!(active_leaves(&bank, &v).unwrap(), vec![0, 7, 9]);
        assert!(active_leaves(&bank, &fv(&[1, 1])).is_err());
    }

    #[test]
    fn select_examples() {
        let names = ["A", "B"];
        let sel = Selector::new(vec![("A".into(), Genome::zeros(4)), ("B".into(), Genome(vec![1.0; 4]))]).unwrap();
        assert_eq!(select_strategy(&sel, &[0]), 1);
        let tie = Selector::uniform(names, Genome(vec![0.5; 4]));
        assert_eq!(select_strategy(&tie, &[1]), 0);
        let sel = Selector::new(vec![
            ("A".into(), Genome(vec![0.9, 0.1, 0.0, 0.0])),
            ("B".into(), Genome(vec![0.0, 0.0, 0.2, 0.2])),
        ])
        .unwrap();
        assert_eq!(select_strategy(&sel, &[0]), 0);
    }
}
