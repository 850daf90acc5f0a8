//! Evolution of strategy selectors.
//!
//! A selector gives every library strategy a genome with one gene per leaf
//! of the tree bank. An obligation activates one leaf per tree; the strategy
//! whose genes over those leaves sum highest is run. Fitness counts the
//! obligations discharged within a fixed budget, and a (μ+λ) loop with
//! Gaussian mutation improves it.

mod dispatch;
mod ga;
mod genome;

pub use dispatch::{active_leaves, dispatch, fitness, select_strategy, Dispatch, FitnessTable, Workbench};
pub use ga::{
    evolve_loop, evolve_with_table, initial_population, mutate, next_generation, stream, write_log, EvolutionConfig,
    EvolutionResult, GenerationStats, InitMode,
};
pub use genome::{parse_selector, Genome, Selector};

pub use dispatch::with_workers;

use crate::featurize::FeaturizeError;
use crate::recommend::RecommendError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvolveError {
    #[error("selector: {0}")]
    Selector(String),
    #[error("genome length {genome} does not match tree bank leaf count {leaves}")]
    LengthMismatch { genome: usize, leaves: usize },
    #[error("selector strategies do not match the strategy library")]
    StrategyMismatch,
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("empty strategy library")]
    EmptyLibrary,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Featurize(#[from] FeaturizeError),
    #[error(transparent)]
    Recommend(#[from] RecommendError),
}
