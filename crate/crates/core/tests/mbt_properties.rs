mod common;

use common::random_feasible_test;
use gameagent::games::{generate_level, LevelParams};
use gameagent::mbt::{coverage, fixtures, generate, objectives, simulate, Budget, SearchConfig, Strategy, TestCase};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fired(efsm: &gameagent::mbt::Efsm, tests: &[TestCase]) -> Vec<bool> {
    let mut out = vec![false; efsm.transition_count()];
    for t in tests {
        let sim = simulate(efsm, t).unwrap();
        for &id in &t[..sim.prefix_length] {
            out[id] = true;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_walks_are_feasible_and_traced(level_seed in 0..20u64, seed in any::<u64>()) {
        let level = generate_level(&LevelParams { seed: level_seed, ..LevelParams::default() }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let test = random_feasible_test(&level.efsm, &mut rng, 15);
        let sim = simulate(&level.efsm, &test).unwrap();
        prop_assert!(sim.feasible);
        prop_assert_eq!(sim.prefix_length, test.len());
        prop_assert_eq!(sim.door_trace.len(), test.len() + 1);
        prop_assert!(sim.door_trace[0].iter().all(|open| !open));
    }

    #[test]
    fn coverage_is_monotone_and_recounts(level_seed in 0..20u64, seed in any::<u64>(), n in 1..6usize) {
        let efsm = generate_level(&LevelParams { seed: level_seed, ..LevelParams::default() }).unwrap().efsm;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tests: Vec<TestCase> = (0..n).map(|_| random_feasible_test(&efsm, &mut rng, 10)).collect();
        let mut last = 0.0;
        for k in 0..=n {
            let c = coverage(&efsm, &tests[..k]).unwrap();
            prop_assert!(c >= last);
            let recount = fired(&efsm, &tests[..k]).iter().filter(|&&f| f).count() as f64 / efsm.transition_count() as f64;
            prop_assert!((c - recount).abs() < 1e-12);
            last = c;
        }
    }

    #[test]
    fn objectives_vanish_exactly_on_fired_transitions(level_seed in 0..20u64, seed in any::<u64>()) {
        let efsm = generate_level(&LevelParams { seed: level_seed, ..LevelParams::default() }).unwrap().efsm;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let test = random_feasible_test(&efsm, &mut rng, 12);
        let scores = objectives(&efsm, &test).unwrap();
        for (t, f) in fired(&efsm, std::slice::from_ref(&test)).into_iter().enumerate() {
            prop_assert_eq!(scores[t] == 0.0, f, "transition {}", t);
            prop_assert!(scores[t] >= 0.0);
        }
    }
}

#[test]
fn suites_only_claim_coverage_they_achieve() {
    let efsm = generate_level(&LevelParams::default()).unwrap().efsm;
    for strategy in Strategy::ALL {
        let suite = generate(&efsm, &SearchConfig::new(strategy, Budget::Evaluations(3000), 4)).unwrap();
        assert_eq!(suite.coverage, coverage(&efsm, &suite.tests).unwrap(), "{strategy}");
        assert!(suite.evaluations <= 3000);
        assert_eq!(suite, generate(&efsm, &SearchConfig::new(strategy, Budget::Evaluations(3000), 4)).unwrap());
    }
}

#[test]
fn fixtures_are_fully_covered_by_every_strategy() {
    for (name, efsm, _) in fixtures::all() {
        for strategy in Strategy::ALL {
            let suite = generate(&efsm, &SearchConfig::new(strategy, Budget::Evaluations(1000), 0)).unwrap();
            assert_eq!(suite.coverage, 1.0, "{name} {strategy}");
        }
    }
}
