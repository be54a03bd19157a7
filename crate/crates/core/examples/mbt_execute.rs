//! Generate a suite for a small generated level, run it with test agents and
//! check the game's doors against the model after every achieved goal.

use gameagent::games::{generate_level, LevelParams};
use gameagent::mbt::{execute_suite, generate, Budget, ExecOptions, SearchConfig, Strategy};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let level = generate_level(&LevelParams { seed, ..LevelParams::default() }).expect("default parameters are feasible");
    println!("{}", level.csv);
    let suite = generate(&level.efsm, &SearchConfig::new(Strategy::Mosa, Budget::Evaluations(5000), seed)).unwrap();
    println!("{} tests cover {:.0}% of {} transitions", suite.tests.len(), 100.0 * suite.coverage, level.efsm.transition_count());
    let maze = level.maze.clone();
    let report = execute_suite(|| maze.clone(), &level.efsm, &suite.tests, ExecOptions::default()).unwrap();
    for t in &report.tests {
        println!(
            "test {:>2}: len {:>2} {} cycles {:>4} door checks {}",
            t.index,
            t.length,
            if t.passed { "pass" } else { "FAIL" },
            t.cycles,
            t.conformance_checks
        );
    }
    println!("tests {} fails {} conformance violations {}", report.n_tests, report.n_fails, report.conformance_violations);
}
