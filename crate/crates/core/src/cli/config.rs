use std::path::{Path, PathBuf};

use crate::evolve::{EvolutionConfig, InitMode};
use crate::featurize::assertion_catalog;

use super::CliError;

/// Settings shared by all subcommands. Command-line flags override them.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub theory: Option<PathBuf>,
    pub library: Option<PathBuf>,
    pub conjectures: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub treebank: Option<PathBuf>,
    pub selector: Option<PathBuf>,
    pub log: Option<PathBuf>,
    pub evolution: EvolutionConfig,
    /// Assertion registry size.
    pub k: usize,
    /// Conjectures to generate and their depth cap.
    pub n: usize,
    pub depth: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            theory: None,
            library: None,
            conjectures: None,
            labels: None,
            features: None,
            treebank: None,
            selector: None,
            log: None,
            evolution: EvolutionConfig::default(),
            k: assertion_catalog().len(),
            n: 30,
            depth: 3,
        }
    }
}

fn num<T: std::str::FromStr>(v: &str, line: usize, key: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Config { line, msg: format!("cannot parse `{v}` as a value for `{key}`") })
}

/// `key = value` lines with `#` comments. Paths are kept as written.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| CliError::Config { line, msg: "expected `key = value`".into() })?;
        if value.is_empty() {
            return Err(CliError::Config { line, msg: format!("missing value for `{key}`") });
        }
        let ev = &mut cfg.evolution;
        match key {
            "theory" => cfg.theory = Some(value.into()),
            "library" => cfg.library = Some(value.into()),
            "conjectures" => cfg.conjectures = Some(value.into()),
            "labels" => cfg.labels = Some(value.into()),
            "features" => cfg.features = Some(value.into()),
            "treebank" => cfg.treebank = Some(value.into()),
            "selector" => cfg.selector = Some(value.into()),
            "log" => cfg.log = Some(value.into()),
            "parents" => ev.parents = num(value, line, key)?,
            "offspring" => ev.offspring = num(value, line, key)?,
            "generations" => ev.generations = num(value, line, key)?,
            "mutation_prob" => ev.mutation_prob = num(value, line, key)?,
            "sigma" => ev.sigma = num(value, line, key)?,
            "budget" => ev.budget = num(value, line, key)?,
            "seed" => ev.seed = num(value, line, key)?,
            "workers" => ev.workers = num(value, line, key)?,
            "init" => {
                ev.init = match value {
                    "uniform" => InitMode::Uniform,
                    "tree-seeded" => InitMode::TreeSeeded,
                    _ => return Err(CliError::Config { line, msg: format!("unknown init mode `{value}`") }),
                }
            }
            "k" => cfg.k = num(value, line, key)?,
            "n" => cfg.n = num(value, line, key)?,
            "depth" => cfg.depth = num(value, line, key)?,
            _ => return Err(CliError::Config { line, msg: format!("unknown key `{key}`") }),
        }
        // Report an invariant violation at the line that introduced it.
        cfg.evolution.validate().map_err(|e| CliError::Config { line, msg: e.to_string() })?;
        let available = assertion_catalog().len();
        if cfg.k == 0 || cfg.k > available {
            return Err(CliError::Config { line, msg: format!("k must lie in 1..={available}") });
        }
    }
    Ok(cfg)
}

/// Reads a config file; relative paths inside it resolve against its directory.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut cfg = parse_config(&text).map_err(|e| match e {
        CliError::Config { line, msg } => CliError::Data(format!("{}:{line}: {msg}", path.display())),
        other => other,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    for p in [
        &mut cfg.theory,
        &mut cfg.library,
        &mut cfg.conjectures,
        &mut cfg.labels,
        &mut cfg.features,
        &mut cfg.treebank,
        &mut cfg.selector,
        &mut cfg.log,
    ]
    .into_iter()
    .flatten()
    {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_and_defaults() {
        assert_eq!(parse_config("generations = 40").unwrap().evolution.generations, 40);
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
        let cfg = parse_config("# comment\nseed = 9 # trailing\ninit = tree-seeded\ntreebank = a/b.trees\n").unwrap();
        assert_eq!(cfg.evolution.seed, 9);
        assert_eq!(cfg.evolution.init, InitMode::TreeSeeded);
        assert_eq!(cfg.treebank, Some(PathBuf::from("a/b.trees")));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(parse_config("seed = 1\nsigma = -1"), Err(CliError::Config { line: 2, .. })));
        assert!(matches!(parse_config("\nfoo = 1"), Err(CliError::Config { line: 2, .. })));
        assert!(matches!(parse_config("generations = many"), Err(CliError::Config { line: 1, .. })));
        assert!(matches!(parse_config("mutation_prob = 2"), Err(CliError::Config { line: 1, .. })));
        assert!(matches!(parse_config("k = 99"), Err(CliError::Config { line: 1, .. })));
        assert!(matches!(parse_config("seed"), Err(CliError::Config { line: 1, .. })));
    }
}
