//! The `evoprove` command line.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for bad data or
//! configuration.

mod config;

use std::ffi::OsString;
use std::fmt::{Display, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::corpus::{
    default_theory, generate_conjectures, label_corpus, parse_conjectures, parse_labels, parse_theory, write_conjectures,
    write_labels, Conjecture, GenParams,
};
use crate::evolve::{dispatch, evolve_loop, parse_selector, with_workers, write_log, Selector, Workbench};
use crate::featurize::{parse_feature_csv, write_feature_csv, AssertionRegistry};
use crate::kernel::{MethodName, Theory};
use crate::recommend::{parse_bank, train_bank, write_bank, TreeBank};
use crate::strategy::{parse_library, run_strategy, Outcome, StrategyLibrary};

pub use config::{load_config, parse_config, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("{0}")]
    Data(String),
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), msg: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

fn data(e: impl Display) -> CliError {
    CliError::Data(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "evoprove", version, about = "Evolve strategy selectors for a small equational prover")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Random seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Method applications allowed per obligation.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Worker threads for parallel evaluation (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct Inputs {
    /// Theory file (default: the built-in theory).
    #[arg(long)]
    theory: Option<PathBuf>,
    /// Strategy library file (default: the built-in library).
    #[arg(long)]
    library: Option<PathBuf>,
    /// Conjecture file, one `id : goal` per line
    #[arg(long)]
    conjectures: Option<PathBuf>,
    /// Trained tree bank
    #[arg(long)]
    treebank: Option<PathBuf>,
    /// Selector file
    #[arg(long)]
    selector: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate provable random conjectures.
    Gen {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label conjectures with the first method of a proof.
    Label {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump assertion bit vectors of conjectures.
    Featurize {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train one tree per method from features and labels.
    Train {
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve a selector over a conjecture corpus.
    Evolve {
        #[command(flatten)]
        inputs: Inputs,
        /// Where to write the selector (default: config `selector`, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fitness log CSV.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Dispatch one conjecture and try to prove it.
    Prove {
        /// Conjecture id.
        id: String,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Fitness of a selector, with optional per-goal results.
    Eval {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fitness of each library strategy on its own.
    Baselines {
        #[command(flatten)]
        inputs: Inputs,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.global.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.global.seed {
        cfg.evolution.seed = s;
    }
    if let Some(b) = cli.global.budget {
        cfg.evolution.budget = b;
    }
    if let Some(w) = cli.global.workers {
        cfg.evolution.workers = w;
    }
    let workers = cfg.evolution.workers;
    with_workers(workers, move || command(cli.command, cfg))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pick<'a>(flag: &'a Option<PathBuf>, fallback: &'a Option<PathBuf>) -> Option<&'a Path> {
    flag.as_deref().or(fallback.as_deref())
}

fn need<'a>(flag: &'a Option<PathBuf>, fallback: &'a Option<PathBuf>, what: &str) -> Result<&'a Path, CliError> {
    pick(flag, fallback).ok_or_else(|| CliError::Usage(format!("missing --{what} (or `{what}` in the config file)")))
}

struct Loaded {
    theory: Theory,
    library: StrategyLibrary,
}

impl Loaded {
    fn new(inputs: &Inputs, cfg: &RunConfig) -> Result<Self, CliError> {
        let theory = match pick(&inputs.theory, &cfg.theory) {
            Some(p) => parse_theory(&read(p)?).map_err(|e| data(format!("{}: {e}", p.display())))?,
            None => default_theory(),
        };
        let library = match pick(&inputs.library, &cfg.library) {
            Some(p) => parse_library(&read(p)?).map_err(|e| data(format!("{}: {e}", p.display())))?,
            None => StrategyLibrary::default_library(),
        };
        Ok(Loaded { theory, library })
    }

    fn conjectures(&self, inputs: &Inputs, cfg: &RunConfig) -> Result<Vec<Conjecture>, CliError> {
        let p = need(&inputs.conjectures, &cfg.conjectures, "conjectures")?;
        parse_conjectures(&read(p)?, &self.theory).map_err(|e| data(format!("{}: {e}", p.display())))
    }
}

fn load_bank(inputs: &Inputs, cfg: &RunConfig, k: usize) -> Result<TreeBank, CliError> {
    let p = need(&inputs.treebank, &cfg.treebank, "treebank")?;
    let bank = parse_bank(&read(p)?).map_err(|e| data(format!("{}: {e}", p.display())))?;
    if bank.min_features() > k {
        return Err(data(format!(
            "tree bank needs {} assertions but the registry has k = {k}",
            bank.min_features()
        )));
    }
    Ok(bank)
}

fn load_selector(inputs: &Inputs, cfg: &RunConfig, bank: &TreeBank, lib: &StrategyLibrary) -> Result<Selector, CliError> {
    let p = need(&inputs.selector, &cfg.selector, "selector")?;
    let sel = parse_selector(&read(p)?).map_err(|e| data(format!("{}: {e}", p.display())))?;
    if sel.genome_len() != bank.leaf_count() {
        return Err(data(format!(
            "genome length {} does not match tree bank leaf count {}",
            sel.genome_len(),
            bank.leaf_count()
        )));
    }
    if !sel.names().eq(lib.names()) {
        return Err(data("selector strategies do not match the strategy library"));
    }
    Ok(sel)
}

fn registry(cfg: &RunConfig) -> Result<AssertionRegistry, CliError> {
    AssertionRegistry::with_size(cfg.k).map_err(data)
}

pub fn outcome_name(o: &Outcome) -> &'static str {
    match o {
        Outcome::Proved(_) => "proved",
        Outcome::Exhausted => "exhausted",
        Outcome::BudgetOut => "budget-out",
    }
}

fn command(cmd: Command, cfg: RunConfig) -> Result<(), CliError> {
    let budget = cfg.evolution.budget;
    match cmd {
        Command::Gen { inputs, n, depth, out } => {
            let l = Loaded::new(&inputs, &cfg)?;
            let params = GenParams {
                n: n.unwrap_or(cfg.n),
                seed: cfg.evolution.seed,
                depth: depth.unwrap_or(cfg.depth),
                vet_budget: budget,
            };
            let cs = generate_conjectures(&l.theory, &l.library, &params).map_err(data)?;
            emit(out.as_deref(), &write_conjectures(&cs))
        }
        Command::Label { inputs, out } => {
            let l = Loaded::new(&inputs, &cfg)?;
            let cs = l.conjectures(&inputs, &cfg)?;
            let res = label_corpus(&cs, &l.theory, budget);
            if !res.dropped.is_empty() {
                eprintln!("warning: {} conjecture(s) left unlabelled: {}", res.dropped.len(), res.dropped.join(", "));
            }
            emit(pick(&out, &cfg.labels), &write_labels(&res.labels))
        }
        Command::Featurize { inputs, out } => {
            let l = Loaded::new(&inputs, &cfg)?;
            let reg = registry(&cfg)?;
            let rows = l
                .conjectures(&inputs, &cfg)?
                .iter()
                .map(|c| reg.featurize(&c.to_state(), &l.theory).map(|v| (c.id.clone(), v)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(data)?;
            emit(pick(&out, &cfg.features), &write_feature_csv(reg.len(), &rows))
        }
        Command::Train { features, labels, out } => {
            let fp = need(&features, &cfg.features, "features")?;
            let lp = need(&labels, &cfg.labels, "labels")?;
            let feats = parse_feature_csv(&read(fp)?).map_err(|e| data(format!("{}: {e}", fp.display())))?;
            let labels = parse_labels(&read(lp)?).map_err(|e| data(format!("{}: {e}", lp.display())))?;
            let mut corpus = Vec::with_capacity(labels.len());
            for (id, m) in &labels {
                let v = feats
                    .iter()
                    .find(|(fid, _)| fid == id)
                    .ok_or_else(|| data(format!("label `{id}` has no feature row")))?;
                corpus.push((v.1.clone(), m.as_str().to_string()));
            }
            let methods: Vec<&str> = MethodName::ALL.iter().map(|m| m.as_str()).collect();
            let bank = train_bank(&corpus, &methods).map_err(data)?;
            emit(pick(&out, &cfg.treebank), &write_bank(&bank))
        }
        Command::Evolve { inputs, out, log } => {
            let l = Loaded::new(&inputs, &cfg)?;
            let cs = l.conjectures(&inputs, &cfg)?;
            let reg = registry(&cfg)?;
            let bank = load_bank(&inputs, &cfg, reg.len())?;
            let wb = Workbench { theory: &l.theory, library: &l.library, bank: &bank, registry: &reg };
            let states: Vec<_> = cs.iter().map(Conjecture::to_state).collect();
            let res = evolve_loop(&cfg.evolution, &states, &wb).map_err(data)?;
            let sel_path = pick(&out, &cfg.selector);
            emit(sel_path, &res.best.to_string())?;
            if let Some(p) = pick(&log, &cfg.log) {
                emit(Some(p), &write_log(&res.log))?;
            }
            if sel_path.is_some() {
                println!("best fitness {}/{}", res.best_fitness, states.len());
            }
            Ok(())
        }
        Command::Prove { id, inputs } => {
            let l = Loaded::new(&inputs, &cfg)?;
            let cs = l.conjectures(&inputs, &cfg)?;
            let c = cs.iter().find(|c| c.id == id).ok_or_else(|| data(format!("no conjecture `{id}`")))?;
            let reg = registry(&cfg)?;
            let bank = load_bank(&inputs, &cfg, reg.len())?;
            let sel = load_selector(&inputs, &cfg, &bank, &l.library)?;
            let wb = Workbench { theory: &l.theory, library: &l.library, bank: &bank, registry: &reg };
            let d = dispatch(&sel, &c.to_state(), &wb, budget).map_err(data)?;
            let mut text = format!("conjecture: {c}\nstrategy: {}\noutcome: {}\n", l.library.name(d.strategy), outcome_name(&d.outcome));
            if let Some(trace) = d.outcome.trace() {
                let steps: Vec<String> = trace.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "trace: {}", steps.join(", "));
            }
            let _ = writeln!(text, "used: {}", d.used);
            emit(None, &text)
        }
        Command::Eval { inputs, out } => {
            let l = Loaded::new(&inputs, &cfg)?;
            let cs = l.conjectures(&inputs, &cfg)?;
            let reg = registry(&cfg)?;
            let bank = load_bank(&inputs, &cfg, reg.len())?;
            let sel = load_selector(&inputs, &cfg, &bank, &l.library)?;
            let wb = Workbench { theory: &l.theory, library: &l.library, bank: &bank, registry: &reg };
            let results = cs
                .par_iter()
                .map(|c| dispatch(&sel, &c.to_state(), &wb, budget))
                .collect::<Result<Vec<_>, _>>()
                .map_err(data)?;
            let proved = results.iter().filter(|d| d.outcome.is_proved()).count();
            if let Some(p) = out.as_deref() {
                let mut csv = String::from("id,strategy,outcome,used\n");
                for (c, d) in cs.iter().zip(&results) {
                    let _ = writeln!(csv, "{},{},{},{}", c.id, l.library.name(d.strategy), outcome_name(&d.outcome), d.used);
                }
                emit(Some(p), &csv)?;
            }
            println!("fitness {proved}/{}", cs.len());
            Ok(())
        }
        Command::Baselines { inputs } => {
            let l = Loaded::new(&inputs, &cfg)?;
            let cs = l.conjectures(&inputs, &cfg)?;
            let mut text = String::from("strategy,fitness\n");
            for (name, e) in l.library.iter() {
                let n = cs.par_iter().filter(|c| run_strategy(&c.to_state(), e, &l.theory, budget).outcome.is_proved()).count();
                let _ = writeln!(text, "{name},{n}");
            }
            emit(None, &text)
        }
    }
}
