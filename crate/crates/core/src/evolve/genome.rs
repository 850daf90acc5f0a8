use std::fmt;

use super::EvolveError;

/// One float per global tree leaf.
#[derive(Clone, Debug, PartialEq)]
pub struct Genome(pub Vec<f64>);

impl Genome {
    pub fn zeros(len: usize) -> Self {
        Genome(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn genes(&self) -> &[f64] {
        &self.0
    }
}

/// Strategy name → genome, aligned with the strategy library order.
#[derive(Clone, Debug, PartialEq)]
pub struct Selector {
    entries: Vec<(String, Genome)>,
}

impl Selector {
    pub fn new(entries: Vec<(String, Genome)>) -> Result<Self, EvolveError> {
        if let Some(len) = entries.first().map(|(_, g)| g.len()) {
            if let Some((name, g)) = entries.iter().find(|(_, g)| g.len() != len) {
                return Err(EvolveError::Selector(format!(
                    "genome of `{name}` has length {}, expected {len}",
                    g.len()
                )));
            }
        }
        if let Some((name, _)) = entries.iter().find(|(_, g)| g.0.iter().any(|x| !x.is_finite())) {
            return Err(EvolveError::Selector(format!("genome of `{name}` has a non-finite gene")));
        }
        Ok(Selector { entries })
    }

    /// Every strategy gets a copy of `genome`.
    pub fn uniform<'a>(names: impl IntoIterator<Item = &'a str>, genome: Genome) -> Self {
        Selector { entries: names.into_iter().map(|n| (n.to_string(), genome.clone())).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn genome_len(&self) -> usize {
        self.entries.first().map_or(0, |(_, g)| g.len())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn genome(&self, i: usize) -> &Genome {
        &self.entries[i].1
    }

    pub fn genome_mut(&mut self, i: usize) -> &mut Genome {
        &mut self.entries[i].1
    }

    pub fn entries(&self) -> &[(String, Genome)] {
        &self.entries
    }

    /// Applies `f` to every gene of every genome.
    pub fn map_genes(&self, f: impl Fn(f64) -> f64) -> Selector {
        Selector {
            entries: self.entries.iter().map(|(n, g)| (n.clone(), Genome(g.0.iter().map(|x| f(*x)).collect()))).collect(),
        }
    }
}

/// `name;` followed by comma-separated shortest round-trip decimals.
impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, g) in &self.entries {
            write!(f, "{name};")?;
            for (i, x) in g.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn parse_selector(text: &str) -> Result<Selector, EvolveError> {
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| EvolveError::Selector(format!("line {}: {msg}", idx + 1));
        let (name, genes) = line.split_once(';').ok_or_else(|| bad("expected `name;genes`".into()))?;
        let genes = if genes.trim().is_empty() {
            Vec::new()
        } else {
            genes
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| bad(format!("bad gene `{x}`"))))
                .collect::<Result<Vec<_>, _>>()?
        };
        entries.push((name.trim().to_string(), Genome(genes)));
    }
    Selector::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_file_round_trip() {
        let sel = Selector::new(vec![
            ("S1".into(), Genome(vec![0.1, 0.25, -3.0, 1e-7])),
            ("S2".into(), Genome(vec![0.0, 1.0, 2.5, 0.3333333333333333])),
        ])
        .unwrap();
        let text = sel.to_string();
        assert!(text.starts_with("S1;0.1,0.25,-3,0.0000001\n"));
        assert_eq!(parse_selector(&text).unwrap(), sel);
    }

    #[test]
    fn ragged_or_malformed_selectors_are_rejected() {
        assert!(parse_selector("S1;0.1,0.2\nS2;0.1\n").is_err());
        assert!(parse_selector("S1 0.1\n").is_err());
        assert!(parse_selector("S1;0.1,x\n").is_err());
        assert!(parse_selector("S1;NaN\n").is_err());
    }
}
