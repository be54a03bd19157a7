//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::{bfs, check_merge_laws, random_feasible_test, random_grid, walkable_cells};
use gameagent::explorer::{run_exploratory, ExplorerConfig, CRASH};
use gameagent::games::maze::commands_issued;
use gameagent::games::{generate_level, ButtonMaze, DungeonConfig, LevelParams, Mutant};
use gameagent::mbt::{execute_suite, fixtures, generate, Budget, ExecOptions, SearchConfig, Strategy};
use gameagent::nav::NavGraph;
use gameagent::playtest::{oracle_soak, run_playtest, PlaytestConfig, SoakConfig};
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn pathfinding() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut pairs, mut mismatches) = (0, 0);
    for _ in 0..200 {
        let grid = random_grid(&mut rng, 20, 20, 0.3);
        let cells = walkable_cells(&grid);
        let g = NavGraph::from_grid(&grid).expect("20x20 grid");
        for _ in 0..50 {
            let (a, b) = (cells[rng.gen_range(0..cells.len())], cells[rng.gen_range(0..cells.len())]);
            let expected = bfs(&grid, a)[b.y as usize][b.x as usize];
            let got = g.find_path(g.node_at(a).unwrap(), g.node_at(b).unwrap()).unwrap().map(|p| p.cost as u32);
            pairs += 1;
            mismatches += usize::from(got != expected);
        }
    }
    let elapsed = started.elapsed();
    verdict(
        mismatches == 0 && elapsed < Duration::from_secs(10),
        format!("{pairs} pairs, {mismatches} cost mismatches, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn merge_laws() -> Verdict {
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    match runner.run(&common::arb_run_and_next(), |(run, obs)| {
        check_merge_laws(&run, &obs).map_err(proptest::test_runner::TestCaseError::fail)
    }) {
        Ok(()) => verdict(true, "1000 cases: idempotence, monotonicity, stale retention, tombstoning".into()),
        Err(e) => verdict(false, e.to_string()),
    }
}

fn soak() -> Verdict {
    let run = |seed: u64, turns: u64, mutants: Vec<Mutant>| {
        oracle_soak(&SoakConfig { dungeon: DungeonConfig { seed, ..DungeonConfig::default() }, turns, mutants }).unwrap()
    };
    let clean: usize = (0..20).map(|s| run(s, 2000, vec![]).violations.len()).sum();
    let caught = (0..20)
        .filter(|&s| run(s, 500, vec![Mutant::BuggyMonsterMove]).first_violation_turn.is_some_and(|t| t < 500))
        .count();
    verdict(clean == 0 && caught >= 18, format!("correct engine {clean} violations; mutant caught on {caught}/20 seeds"))
}

fn playtest() -> Verdict {
    let (mut won, mut dirty) = (0, 0);
    for seed in 0..25 {
        let dungeon = DungeonConfig { level_count: 2, grid_size: 20, monsters_per_level: 4, scrolls_per_level: 3, seed, ..DungeonConfig::default() };
        let (report, _) = run_playtest(&PlaytestConfig { max_cycles: 4000, ..PlaytestConfig::new(dungeon) }).unwrap();
        if report.won {
            won += 1;
            dirty += usize::from(!report.violations.is_empty());
        }
    }
    verdict(won * 5 >= 25 * 4 && dirty == 0, format!("won {won}/25, {dirty} winning runs with violations"))
}

fn within(x: usize, target: f64) -> bool {
    (x as f64 - target).abs() <= 0.2 * target
}

fn level_size() -> Verdict {
    let before = commands_issued();
    let mut sizes = Vec::new();
    for seed in 0..10 {
        let e = generate_level(&LevelParams::l1(seed)).unwrap().efsm;
        sizes.push((e.state_count(), e.transition_count(), e.variables().len()));
    }
    let commands = commands_issued() - before;
    let ok = sizes.iter().all(|&(s, t, v)| within(s, 144.0) && within(t, 558.0) && within(v, 40.0));
    let (tmin, tmax) = (sizes.iter().map(|s| s.1).min().unwrap(), sizes.iter().map(|s| s.1).max().unwrap());
    verdict(
        ok && commands == 0,
        format!("10 models: {} states, {tmin}..{tmax} transitions, {} variables; {commands} game commands", sizes[0].0, sizes[0].2),
    )
}

fn strategies() -> Verdict {
    let started = Instant::now();
    let mut sums = [0.0f64; 3];
    let mut zero = 0;
    for level_seed in 0..10 {
        let efsm = generate_level(&LevelParams::l1(level_seed)).unwrap().efsm;
        for seed in 0..10 {
            for (i, strategy) in Strategy::ALL.into_iter().enumerate() {
                let c = generate(&efsm, &SearchConfig::new(strategy, Budget::Evaluations(50_000), seed)).unwrap().coverage;
                sums[i] += c;
                zero += usize::from(c <= 0.0);
            }
        }
    }
    let means = sums.map(|s| s / 100.0);
    let idx = |s: Strategy| Strategy::ALL.iter().position(|&x| x == s).unwrap();
    let mut tiny_ok = true;
    for (_, efsm, _) in fixtures::all() {
        for strategy in Strategy::ALL {
            for seed in 0..10 {
                let suite = generate(&efsm, &SearchConfig::new(strategy, Budget::Evaluations(1000), seed)).unwrap();
                tiny_ok &= suite.coverage == 1.0;
            }
        }
    }
    let elapsed = started.elapsed();
    let (mosa, random) = (means[idx(Strategy::Mosa)], means[idx(Strategy::Random)]);
    verdict(
        zero == 0 && mosa >= random - 0.02 && tiny_ok && elapsed < Duration::from_secs(300),
        format!(
            "mean coverage random {random:.3}, muPlusLambda {:.3}, mosa {mosa:.3}; zero-coverage runs {zero}; fixtures full {tiny_ok}; {:.0}s",
            means[idx(Strategy::MuPlusLambda)],
            elapsed.as_secs_f64()
        ),
    )
}

fn conformance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tests, mut fails, mut mismatches, mut checks) = (0, 0, 0, 0);
    for level_seed in 0..10 {
        let level = generate_level(&LevelParams { seed: level_seed, ..LevelParams::default() }).unwrap();
        let suite: Vec<_> = (0..10).map(|_| random_feasible_test(&level.efsm, &mut rng, 12)).collect();
        let maze = level.maze.clone();
        let report = execute_suite(|| maze.clone(), &level.efsm, &suite, ExecOptions { seed: level_seed, ..ExecOptions::default() }).unwrap();
        tests += report.n_tests;
        fails += report.n_fails;
        mismatches += report.conformance_violations;
        checks += report.tests.iter().map(|t| t.conformance_checks).sum::<usize>();
    }
    let passed = tests - fails;
    verdict(
        tests == 100 && mismatches == 0 && passed >= 95,
        format!("{passed}/{tests} passed, {checks} door checks, {mismatches} mismatches"),
    )
}

fn explorer() -> Verdict {
    let (mut covered, mut crashes) = (0, 0);
    let mut worst = usize::MAX;
    for seed in 0..10 {
        let csv = generate_level(&LevelParams::open(12, seed)).unwrap().csv;
        let maze = ButtonMaze::load_csv(&csv).unwrap();
        let r = run_exploratory(|| maze.clone(), &ExplorerConfig::new(300, seed), &[]).unwrap();
        worst = worst.min(r.unique_interactions);
        covered += usize::from(r.unique_interactions * 10 >= 12 * 9);
        let faulty = maze.clone().with_mutant(Mutant::CrashButton);
        let r = run_exploratory(|| faulty.clone(), &ExplorerConfig::new(300, seed), &[]).unwrap();
        crashes += usize::from(r.violations.iter().any(|v| v.oracle == CRASH));
    }
    verdict(
        covered == 10 && crashes == 10,
        format!("coverage >= 90% on {covered}/10 seeds (worst {worst}/12); crash found on {crashes}/10"),
    )
}

fn without_time(text: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(text).expect("--json prints JSON");
    if let Some(o) = v.as_object_mut() {
        o.remove("time");
    }
    v
}

fn determinism() -> Verdict {
    let runs: [&[&str]; 6] = [
        &["playtest", "--seed", "3"],
        &["genlevel", "--seed", "3"],
        &["mbt-gen", "--seed", "7", "--strategy", "random", "--budget", "50000"],
        &["mbt-run", "--seed", "3", "--budget", "2000"],
        &["explore", "--seed", "3", "--mutant", "crashButton"],
        &["oracle-soak", "--seed", "3", "--turns", "1000", "--mutant", "buggyMonsterMove"],
    ];
    let bin = env!("CARGO_BIN_EXE_gameagent");
    let mut differing = Vec::new();
    for args in runs {
        let once = || {
            let out = Command::new(bin).args(args).arg("--json").output().expect("binary runs");
            String::from_utf8(out.stdout).expect("utf-8")
        };
        let (a, b) = (once(), once());
        let same = if args[0] == "mbt-run" { without_time(&a) == without_time(&b) } else { a == b };
        if !same || a.is_empty() {
            differing.push(args[0]);
        }
    }
    verdict(differing.is_empty(), format!("6 subcommands twice; differing: {differing:?}"))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("A* cost equals BFS on random grids", pathfinding),
        ("belief merge laws", merge_laws),
        ("implanted assertions: clean engine, buggy monsters caught", soak),
        ("shrine playtest wins", playtest),
        ("generated model size near L1, offline", level_size),
        ("search strategies", strategies),
        ("model-game conformance", conformance),
        ("explorer coverage and crash oracle", explorer),
        ("CLI determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| *f == n.to_string()) {
            continue;
        }
        let v = check();
        failed += usize::from(!v.passed);
        println!("criterion {n} {}: {name}: {}", if v.passed { "PASS" } else { "FAIL" }, v.detail);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
