use evoprove::corpus::{
    default_theory, finishing_strategy, generate_conjectures, label_corpus, parse_conjectures, GenParams,
};
use evoprove::featurize::AssertionRegistry;
use evoprove::kernel::{apply_method, MethodInstance, ProofState, DEFAULT_STEP_CAP};
use evoprove::strategy::{run_strategy, StrategyLibrary};

const DEMO: &str = include_str!("../data/demo.cnj");

#[test]
fn generated_corpus_mixes_rewriting_and_induction_goals() {
    let th = default_theory();
    let lib = StrategyLibrary::default_library();
    let cs = generate_conjectures(&th, &lib, &GenParams { n: 30, seed: 1, ..Default::default() }).unwrap();
    assert_eq!(cs.len(), 30);
    let (s1, s2) = (lib.get("S1").unwrap(), lib.get("S2").unwrap());
    let proves = |c: &evoprove::corpus::Conjecture, e| run_strategy(&c.to_state(), e, &th, 200).outcome.is_proved();
    let simp_only = cs.iter().filter(|c| proves(c, s1) && !proves(c, s2)).count();
    let induction = cs.iter().filter(|c| proves(c, s2) && !proves(c, s1)).count();
    assert!(simp_only > 0 && induction > 0, "simp-only {simp_only}, induction {induction}");
}

#[test]
fn labels_replay_with_the_finishing_strategy() {
    let th = default_theory();
    let lib = StrategyLibrary::default_library();
    let cs = generate_conjectures(&th, &lib, &GenParams { n: 20, seed: 9, ..Default::default() }).unwrap();
    let labels = label_corpus(&cs, &th, 200);
    assert!(!labels.labels.is_empty());
    let finish = finishing_strategy();
    for l in &labels.labels {
        let c = cs.iter().find(|c| c.id == l.id).unwrap();
        let next = apply_method(&c.to_state(), &l.method, &th, DEFAULT_STEP_CAP);
        let next = next.first().expect("label method applies");
        assert!(next.is_proved() || run_strategy(next, &finish, &th, 199).outcome.is_proved(), "{c} / {}", l.method);
    }
}

/// Initial states plus the states one or two method applications away.
fn obligations() -> Vec<ProofState> {
    let th = default_theory();
    let mut out = Vec::new();
    for c in parse_conjectures(DEMO, &th).unwrap() {
        let start = c.to_state();
        let vars = c.goal().conclusion_vars();
        let mut firsts = vec![MethodInstance::simp(), MethodInstance::auto()];
        firsts.extend(vars.iter().map(|(v, _)| MethodInstance::induct(v)));
        firsts.extend(vars.iter().map(|(v, _)| MethodInstance::cases(v)));
        out.push(start.clone());
        for m in &firsts {
            for next in apply_method(&start, m, &th, DEFAULT_STEP_CAP) {
                for after in apply_method(&next, &MethodInstance::simp(), &th, DEFAULT_STEP_CAP) {
                    out.push(after);
                }
                out.push(next);
            }
        }
    }
    out.retain(|s| !s.is_proved());
    out
}

#[test]
fn every_assertion_varies_over_the_demo_corpus() {
    let th = default_theory();
    let reg = AssertionRegistry::default();
    let vectors: Vec<_> = obligations().iter().map(|s| reg.featurize(s, &th).unwrap()).collect();
    for (i, a) in reg.assertions().iter().enumerate() {
        let ones = vectors.iter().filter(|v| v.get(i) == Some(true)).count();
        assert!(ones > 0 && ones < vectors.len(), "{a:?} is constant over {} obligations", vectors.len());
    }
}

#[test]
fn generation_fails_when_nothing_can_be_vetted() {
    let th = evoprove::corpus::parse_theory("datatype unit = U\nfun id: id(U) -> U").unwrap();
    let lib = StrategyLibrary::default_library();
    let err = generate_conjectures(&th, &lib, &GenParams { n: 3, seed: 1, depth: 2, vet_budget: 0 });
    assert!(err.is_err());
}
