use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::kernel::ProofState;

use super::dispatch::{FitnessTable, Workbench};
use super::genome::{Genome, Selector};
use super::EvolveError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitMode {
    Uniform,
    TreeSeeded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub parents: usize,
    pub offspring: usize,
    pub generations: usize,
    pub mutation_prob: f64,
    pub sigma: f64,
    pub budget: usize,
    pub seed: u64,
    pub init: InitMode,
    /// Evaluation threads, 0 for the rayon default. Never affects results.
    pub workers: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            parents: 4,
            offspring: 12,
            generations: 40,
            mutation_prob: 0.1,
            sigma: 0.25,
            budget: 200,
            seed: 0,
            init: InitMode::Uniform,
            workers: 0,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), EvolveError> {
        let bad = |m: &str| Err(EvolveError::Config(m.to_string()));
        if self.parents < 1 {
            return bad("parents must be at least 1");
        }
        if self.offspring < 1 {
            return bad("offspring must be at least 1");
        }
        if self.generations < 1 {
            return bad("generations must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return bad("mutation probability must lie in [0, 1]");
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad("sigma must be positive");
        }
        if self.budget < 1 {
            return bad("budget must be at least 1");
        }
        Ok(())
    }

    pub fn population(&self) -> usize {
        self.parents + self.offspring
    }
}

const TAG_INIT: u64 = 1;
const TAG_MUTATE: u64 = 2;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for one (purpose, generation, individual, strategy)
/// cell; genes are then drawn from it in order.
pub fn stream(seed: u64, tag: u64, generation: u64, individual: u64, strategy: u64) -> ChaCha8Rng {
    let key = [tag, generation, individual, strategy].into_iter().fold(splitmix(seed), |h, x| splitmix(h ^ x));
    ChaCha8Rng::seed_from_u64(key)
}

/// Per gene: with probability `p` add a N(0, σ) step.
pub fn mutate(g: &Genome, p: f64, sigma: f64, rng: &mut impl Rng) -> Genome {
    let step = Normal::new(0.0, sigma).expect("sigma validated positive");
    Genome(
        g.0.iter()
            .map(|&x| {
                let u: f64 = rng.random();
                if u < p {
                    x + step.sample(rng)
                } else {
                    x
                }
            })
            .collect(),
    )
}

fn mutate_selector(sel: &Selector, cfg: &EvolutionConfig, tag: u64, generation: u64, individual: u64) -> Selector {
    let mut out = sel.clone();
    for s in 0..sel.len() {
        let mut rng = stream(cfg.seed, tag, generation, individual, s as u64);
        *out.genome_mut(s) = mutate(sel.genome(s), cfg.mutation_prob, cfg.sigma, &mut rng);
    }
    out
}

/// Truncation selection with elitism. `generation` keys the mutation streams.
pub fn next_generation(population: &[(Selector, usize)], cfg: &EvolutionConfig, generation: u64) -> Vec<Selector> {
    let mut ranked: Vec<&(Selector, usize)> = population.iter().collect();
    ranked.sort_by_key(|r| std::cmp::Reverse(r.1));
    let elite: Vec<&Selector> = ranked.iter().take(cfg.parents).map(|(s, _)| s).collect();
    let mut next: Vec<Selector> = elite.iter().map(|s| (*s).clone()).collect();
    for j in 0..cfg.offspring {
        let parent = elite[j % elite.len()];
        next.push(mutate_selector(parent, cfg, TAG_MUTATE, generation, j as u64));
    }
    next
}

pub fn initial_population(cfg: &EvolutionConfig, names: &[&str], wb: &Workbench<'_>) -> Vec<Selector> {
    let len = wb.bank.leaf_count();
    (0..cfg.population())
        .map(|i| match cfg.init {
            InitMode::Uniform => {
                let entries = names
                    .iter()
                    .enumerate()
                    .map(|(s, n)| {
                        let mut rng = stream(cfg.seed, TAG_INIT, 0, i as u64, s as u64);
                        (n.to_string(), Genome((0..len).map(|_| rng.random::<f64>()).collect()))
                    })
                    .collect();
                Selector::new(entries).expect("uniform genomes are finite and equal length")
            }
            InitMode::TreeSeeded => {
                let base = Selector::uniform(names.iter().copied(), Genome(wb.bank.leaf_expectations()));
                mutate_selector(&base, cfg, TAG_INIT, 0, i as u64)
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: usize,
    pub mean_fitness: f64,
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub best: Selector,
    pub best_fitness: usize,
    pub log: Vec<GenerationStats>,
}

pub fn write_log(log: &[GenerationStats]) -> String {
    let mut out = String::from("generation,best_fitness,mean_fitness\n");
    for g in log {
        let _ = writeln!(out, "{},{},{}", g.generation, g.best_fitness, g.mean_fitness);
    }
    out
}

pub fn evolve_loop(cfg: &EvolutionConfig, corpus: &[ProofState], wb: &Workbench<'_>) -> Result<EvolutionResult, EvolveError> {
    cfg.validate()?;
    let table = FitnessTable::build(corpus, wb, cfg.budget, cfg.workers)?;
    Ok(evolve_with_table(cfg, &table, wb))
}

/// The generation loop over a prebuilt table (its budget is the table's).
pub fn evolve_with_table(cfg: &EvolutionConfig, table: &FitnessTable, wb: &Workbench<'_>) -> EvolutionResult {
    let names: Vec<&str> = wb.library.names().collect();
    let mut population = initial_population(cfg, &names, wb);
    let mut log = Vec::with_capacity(cfg.generations);
    let mut scored = Vec::new();
    for generation in 0..cfg.generations {
        scored = population.iter().map(|s| (s.clone(), table.fitness(s))).collect::<Vec<_>>();
        let best = scored.iter().map(|(_, f)| *f).max().unwrap_or(0);
        let mean = scored.iter().map(|(_, f)| *f as f64).sum::<f64>() / scored.len() as f64;
        log.push(GenerationStats { generation, best_fitness: best, mean_fitness: mean });
        if generation + 1 < cfg.generations {
            population = next_generation(&scored, cfg, generation as u64 + 1);
        }
    }
    let (best, best_fitness) = scored
        .iter()
        .fold(None::<&(Selector, usize)>, |acc, x| match acc {
            Some(a) if a.1 >= x.1 => Some(a),
            _ => Some(x),
        })
        .cloned()
        .expect("population is non-empty");
    EvolutionResult { best, best_fitness, log }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutation_with_zero_probability_is_identity() {
        let g = Genome(vec![0.3, -1.0, 2.0]);
        assert_eq!(mutate(&g, 0.0, 0.25, &mut stream(1, 2, 3, 4, 5)), g);
    }

    #[test]
    fn tiny_sigma_stays_close() {
        let g = Genome(vec![0.3, -1.0, 2.0]);
        let m = mutate(&g, 1.0, 1e-12, &mut stream(1, 2, 3, 4, 5));
        assert!(m.0.iter().zip(&g.0).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn mutation_golden_value() {
        let m = mutate(&Genome::zeros(4), 1.0, 0.25, &mut ChaCha8Rng::seed_from_u64(7));
        let again = mutate(&Genome::zeros(4), 1.0, 0.25, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(m, again);
        assert_eq!(m.0, GOLDEN);
    }

    const GOLDEN: [f64; 4] = [-0.3458554300021023, 0.08994476458600582, -0.16249661375218327, 0.27051191127576124];

    fn sel(x: f64) -> Selector {
        Selector::uniform(["A"], Genome(vec![x; 4]))
    }

    #[test]
    fn elite_survives_unchanged() {
        let cfg = EvolutionConfig { parents: 1, offspring: 1, mutation_prob: 1.0, ..Default::default() };
        let next = next_generation(&[(sel(0.0), 3), (sel(1.0), 5)], &cfg, 1);
        assert_eq!(next.len(), 2);
        assert_eq!(next[0], sel(1.0));
        assert_ne!(next[1], sel(1.0));
    }

    #[test]
    fn ties_keep_earliest() {
        let cfg = EvolutionConfig { parents: 2, offspring: 1, ..Default::default() };
        let pop = [(sel(0.0), 1), (sel(1.0), 1), (sel(2.0), 1)];
        let next = next_generation(&pop, &cfg, 1);
        assert_eq!(&next[..2], &[sel(0.0), sel(1.0)]);
    }

    #[test]
    fn config_invariants() {
        assert!(EvolutionConfig::default().validate().is_ok());
        assert!(EvolutionConfig { sigma: -1.0, ..Default::default() }.validate().is_err());
        assert!(EvolutionConfig { mutation_prob: 1.5, ..Default::default() }.validate().is_err());
        assert!(EvolutionConfig { parents: 0, ..Default::default() }.validate().is_err());
        assert!(EvolutionConfig { budget: 0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn log_csv() {
        let log = [GenerationStats { generation: 0, best_fitness: 3, mean_fitness: 1.5 }];
        assert_eq!(write_log(&log), "generation,best_fitness,mean_fitness\n0,3,1.5\n");
    }
}
