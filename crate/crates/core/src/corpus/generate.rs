use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::kernel::{normalize, Binding, RuleBook, Sym, Term, Theory, DEFAULT_STEP_CAP};
use crate::strategy::{run_strategy, StrategyLibrary};

use super::{Conjecture, CorpusError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub seed: u64,
    /// Maximum depth of either side (a leaf has depth 1).
    pub depth: usize,
    /// Method-application budget for the provability check.
    pub vet_budget: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { n: 30, seed: 1, depth: 3, vet_budget: 200 }
    }
}

const BATCH: usize = 64;

/// Samples random well-typed equations and keeps those some library
/// strategy proves within the vetting budget. Ids are `g1..gn`.
pub fn generate_conjectures(
    theory: &Theory,
    library: &StrategyLibrary,
    params: &GenParams,
) -> Result<Vec<Conjecture>, CorpusError> {
    if params.n == 0 {
        return Err(CorpusError::Generation("n must be at least 1".into()));
    }
    if params.depth < 2 {
        return Err(CorpusError::Generation("depth cap must be at least 2".into()));
    }
    if theory.functions.is_empty() {
        return Err(CorpusError::Generation("theory defines no functions".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut sampler = Sampler { theory, rng: &mut rng };
    let limit = 1000 * params.n;
    let mut drawn = 0;
    let mut kept: Vec<(Term, Term)> = Vec::new();
    while kept.len() < params.n && drawn < limit {
        let batch: Vec<(Term, Term)> =
            (0..BATCH.min(limit - drawn)).map(|_| sampler.equation(params.depth)).collect();
        drawn += batch.len();
        let ok: Vec<bool> = batch.par_iter().map(|(l, r)| plausible(theory, l, r) && vet(theory, library, l, r, params.vet_budget)).collect();
        for ((l, r), good) in batch.into_iter().zip(ok) {
            if good && kept.len() < params.n && !kept.iter().any(|(a, b)| *a == l && *b == r) {
                kept.push((l, r));
            }
        }
    }
    if kept.len() < params.n {
        return Err(CorpusError::Generation(format!(
            "only {} provable conjectures found in {drawn} samples, {} requested",
            kept.len(),
            params.n
        )));
    }
    Ok(kept.into_iter().enumerate().map(|(i, (l, r))| Conjecture::from_equation(format!("g{}", i + 1), l, r)).collect())
}

struct Sampler<'a, R> {
    theory: &'a Theory,
    rng: &'a mut R,
}

impl<R: Rng> Sampler<'_, R> {
    fn var(&mut self, ty: &Sym) -> Term {
        let pool: Vec<String> = match &**ty {
            "nat" => vec!["n".into(), "m".into()],
            "list" => vec!["xs".into(), "ys".into()],
            other => vec![format!("{other}v"), format!("{other}w")],
        };
        Term::var(pool.choose(self.rng).expect("non-empty pool"), ty)
    }

    fn term(&mut self, ty: &Sym, depth: usize) -> Term {
        let dt = self.theory.datatype(ty).expect("types come from the theory");
        let leaves: Vec<usize> = (0..dt.constructors.len()).filter(|&i| dt.constructors[i].args.is_empty()).collect();
        if depth <= 1 || self.rng.random_bool(0.3) {
            if leaves.is_empty() || self.rng.random_bool(0.6) {
                return self.var(ty);
            }
            let c = &dt.constructors[*leaves.choose(self.rng).expect("non-empty")];
            return Term::Ctor { name: c.name.clone(), ty: ty.clone(), args: Vec::new() };
        }
        let funs: Vec<_> = self.theory.functions.iter().filter(|f| f.result == *ty).collect();
        let use_fun = !funs.is_empty() && self.rng.random_bool(0.6);
        if use_fun {
            let f = *funs.choose(self.rng).expect("non-empty");
            let args = f.arg_types.iter().map(|t| self.term(t, depth - 1)).collect();
            Term::Fun { name: f.name.clone(), ty: ty.clone(), args }
        } else {
            let c = dt.constructors.choose(self.rng).expect("datatypes have constructors");
            let args = c.args.iter().map(|t| self.term(t, depth - 1)).collect();
            Term::Ctor { name: c.name.clone(), ty: ty.clone(), args }
        }
    }

    fn equation(&mut self, depth: usize) -> (Term, Term) {
        let f = self.theory.functions.choose(self.rng).expect("theory has functions");
        let args = f.arg_types.iter().map(|t| self.term(t, depth - 1)).collect();
        let lhs = Term::Fun { name: f.name.clone(), ty: f.result.clone(), args };
        let rhs = if self.rng.random_bool(1.0 / 3.0) {
            normalize(&lhs, &RuleBook::new(&[], Some(self.theory)), DEFAULT_STEP_CAP).term
        } else {
            self.term(&f.result, depth - 1)
        };
        (lhs, rhs)
    }
}

/// Small closed constructor terms of type `ty`, by increasing depth.
pub fn ground_instances(theory: &Theory, ty: &str, count: usize) -> Vec<Term> {
    let mut by_type: std::collections::BTreeMap<Sym, Vec<Term>> = Default::default();
    for _ in 0..4 {
        let mut next = by_type.clone();
        for dt in &theory.datatypes {
            let slot = next.entry(dt.name.clone()).or_default();
            for c in &dt.constructors {
                let pools: Option<Vec<&Vec<Term>>> = c.args.iter().map(|t| by_type.get(t)).collect();
                let Some(pools) = pools else { continue };
                for combo in product(&pools, count) {
                    let t = Term::Ctor { name: c.name.clone(), ty: dt.name.clone(), args: combo };
                    if !slot.contains(&t) && slot.len() < count {
                        slot.push(t);
                    }
                }
            }
        }
        by_type = next;
    }
    by_type.remove(ty).unwrap_or_default()
}

/// Cartesian product of the first `width` entries of each pool.
fn product(pools: &[&Vec<Term>], width: usize) -> Vec<Vec<Term>> {
    pools.iter().fold(vec![Vec::new()], |acc, pool| {
        acc.iter()
            .flat_map(|prefix| {
                pool.iter().take(width).map(move |t| {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    p
                })
            })
            .collect()
    })
}

/// False if the equation is syntactically trivial or some small ground
/// instance evaluates to different values.
fn plausible(theory: &Theory, lhs: &Term, rhs: &Term) -> bool {
    if lhs == rhs {
        return false;
    }
    let mut vars = lhs.vars();
    for v in rhs.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let book = RuleBook::new(&[], Some(theory));
    let values: Vec<Vec<Term>> = vars.iter().map(|(_, t)| ground_instances(theory, t, 4)).collect();
    let mut bindings = vec![Binding::new()];
    for ((name, _), vals) in vars.iter().zip(&values) {
        bindings = bindings
            .iter()
            .flat_map(|b| {
                vals.iter().map(move |v| {
                    let mut b = b.clone();
                    b.insert(name.clone(), v.clone());
                    b
                })
            })
            .collect();
    }
    bindings.iter().all(|b| {
        let l = normalize(&crate::kernel::substitute(lhs, b).expect("well-typed"), &book, DEFAULT_STEP_CAP);
        let r = normalize(&crate::kernel::substitute(rhs, b).expect("well-typed"), &book, DEFAULT_STEP_CAP);
        l.normal && r.normal && l.term == r.term
    })
}

fn vet(theory: &Theory, library: &StrategyLibrary, lhs: &Term, rhs: &Term, budget: usize) -> bool {
    let st = Conjecture::from_equation("v", lhs.clone(), rhs.clone()).to_state();
    library.iter().any(|(_, e)| run_strategy(&st, e, theory, budget).outcome.is_proved())
}
