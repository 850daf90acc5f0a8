use std::sync::OnceLock;

use evoprove::corpus::{default_theory, parse_conjectures, parse_term_in};
use evoprove::evolve::{mutate, parse_selector, select_strategy, stream, Genome, Selector};
use evoprove::featurize::FeatureVector;
use evoprove::kernel::{normalize, replay, RuleBook, Term, Theory, DEFAULT_STEP_CAP};
use evoprove::recommend::{parse_tree, serialize_tree, Branch, MethodTree};
use evoprove::strategy::{run_strategy, StrategyLibrary};
use proptest::prelude::*;

fn theory() -> &'static Theory {
    static TH: OnceLock<Theory> = OnceLock::new();
    TH.get_or_init(default_theory)
}

const VARS: &[(&str, &str)] = &[("n", "nat"), ("m", "nat"), ("xs", "list")];

fn fun(name: &str, args: Vec<Term>) -> Term {
    theory().fun_app(name, args).unwrap()
}

fn ctor(name: &str, args: Vec<Term>) -> Term {
    theory().ctor_app(name, args).unwrap()
}

fn list_term() -> BoxedStrategy<Term> {
    let leaf = prop_oneof![Just(ctor("Nil", vec![])), Just(Term::var("xs", "list"))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|l| fun("rev", vec![l])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| fun("append", vec![a, b])),
            inner.prop_map(|l| ctor("Cons", vec![ctor("Zero", vec![]), l])),
        ]
    })
    .boxed()
}

fn nat_term() -> BoxedStrategy<Term> {
    let leaf = prop_oneof![Just(ctor("Zero", vec![])), Just(Term::var("n", "nat")), Just(Term::var("m", "nat"))];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| ctor("Suc", vec![t])),
            inner.clone().prop_map(|t| fun("double", vec![t])),
            inner.clone().prop_map(|t| fun("pred", vec![t])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| fun("add", vec![a, b])),
            (inner.clone(), inner).prop_map(|(a, b)| fun("mul", vec![a, b])),
            list_term().prop_map(|l| fun("len", vec![l])),
        ]
    })
    .boxed()
}

fn any_term() -> BoxedStrategy<Term> {
    prop_oneof![nat_term(), list_term()].boxed()
}

fn expectation() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0f64]
}

fn branch() -> impl Strategy<Value = Branch> {
    (0usize..120, expectation(), expectation()).prop_map(|(assertion, if_true, if_false)| Branch {
        assertion,
        if_true,
        if_false,
    })
}

fn tree() -> impl Strategy<Value = MethodTree> {
    (0usize..120, branch(), branch()).prop_map(|(root, on_true, on_false)| MethodTree {
        method: "m".into(),
        root,
        on_true,
        on_false,
    })
}

/// Genes on a 1/8 grid so that scaling by powers of two and integer shifts
/// are exact.
fn grid_selector() -> impl Strategy<Value = (Selector, Vec<usize>)> {
    (2usize..6, 1usize..5).prop_flat_map(|(strategies, trees)| {
        (
            prop::collection::vec(prop::collection::vec(-80i32..80, 4 * trees), strategies),
            prop::collection::vec(0usize..4, trees),
        )
            .prop_map(|(genomes, leaves)| {
                let entries = genomes
                    .into_iter()
                    .enumerate()
                    .map(|(i, g)| (format!("S{i}"), Genome(g.into_iter().map(|x| f64::from(x) / 8.0).collect())))
                    .collect();
                let active = leaves.iter().enumerate().map(|(t, l)| 4 * t + l).collect();
                (Selector::new(entries).unwrap(), active)
            })
    })
}

fn corpus_states() -> Vec<evoprove::kernel::ProofState> {
    let mut text = String::from(include_str!("../data/demo.cnj"));
    text.push_str(include_str!("../data/separable.cnj"));
    parse_conjectures(&text, theory()).unwrap().iter().map(|c| c.to_state()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalization_is_idempotent_and_typed(t in any_term()) {
        let book = RuleBook::new(&[], Some(theory()));
        let once = normalize(&t, &book, DEFAULT_STEP_CAP);
        prop_assume!(once.normal);
        let twice = normalize(&once.term, &book, DEFAULT_STEP_CAP);
        prop_assert_eq!(twice.steps, 0);
        prop_assert_eq!(&twice.term, &once.term);
        prop_assert_eq!(once.term.ty(), t.ty());
    }

    #[test]
    fn term_text_round_trips(t in any_term()) {
        prop_assert_eq!(parse_term_in(theory(), &t.to_string(), VARS).unwrap(), t);
    }

    #[test]
    fn tree_text_round_trips(t in tree()) {
        let text = serialize_tree(&t);
        let back = parse_tree(&text, "m").unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(serialize_tree(&back), text);
    }

    #[test]
    fn selector_text_round_trips(genes in prop::collection::vec(prop::collection::vec(-1e6..1e6f64, 8), 1..5)) {
        let sel = Selector::new(genes.into_iter().enumerate().map(|(i, g)| (format!("S{i}"), Genome(g))).collect()).unwrap();
        prop_assert_eq!(parse_selector(&sel.to_string()).unwrap(), sel);
    }

    #[test]
    fn feature_vector_text_round_trips(bits in prop::collection::vec(any::<bool>(), 0..40)) {
        let v = FeatureVector::new(bits);
        prop_assert_eq!(v.to_string().parse::<FeatureVector>().unwrap(), v);
    }

    #[test]
    fn argmax_ignores_uniform_scaling_and_shift((sel, active) in grid_selector(), power in -3i32..4, shift in -20i32..20) {
        let base = select_strategy(&sel, &active);
        let c = 2f64.powi(power);
        prop_assert_eq!(select_strategy(&sel.map_genes(|x| x * c), &active), base);
        prop_assert_eq!(select_strategy(&sel.map_genes(|x| x + f64::from(shift)), &active), base);
    }

    #[test]
    fn mutation_without_probability_is_identity(g in prop::collection::vec(-5.0..5.0f64, 0..30), seed in any::<u64>()) {
        let g = Genome(g);
        prop_assert_eq!(mutate(&g, 0.0, 0.25, &mut stream(seed, 0, 0, 0, 0)), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn more_budget_keeps_proofs(goal in 0usize..71, strategy in 0usize..4, budget in 0usize..40, extra in 0usize..200) {
        let states = corpus_states();
        let st = &states[goal % states.len()];
        let lib = StrategyLibrary::default_library();
        let small = run_strategy(st, lib.expr(strategy), theory(), budget);
        let large = run_strategy(st, lib.expr(strategy), theory(), budget + extra);
        prop_assert!(small.used <= budget);
        if small.outcome.is_proved() {
            prop_assert_eq!(&large.outcome, &small.outcome);
            let trace = small.outcome.trace().unwrap();
            prop_assert!(replay(st, trace, theory(), DEFAULT_STEP_CAP).unwrap().is_proved());
        }
    }
}
