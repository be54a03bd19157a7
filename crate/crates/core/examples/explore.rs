//! Scriptless exploration of an all-open ButtonMaze whose last button crashes
//! the game, with a custom oracle on top of the built-in ones.

use gameagent::explorer::{run_exploratory, CustomOracle, ExplorerConfig};
use gameagent::games::{generate_level, ButtonMaze, LevelParams, Mutant};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let csv = generate_level(&LevelParams::open(12, seed)).expect("open level").csv;
    let maze = ButtonMaze::load_csv(&csv).unwrap().with_mutant(Mutant::CrashButton);
    let pressed_twice: CustomOracle<ButtonMaze> =
        Box::new(|m, _| (m.press_count(0) > 1).then(|| format!("b0 pressed {} times", m.press_count(0))));
    let report = run_exploratory(|| maze.clone(), &ExplorerConfig::new(300, seed), &[pressed_twice]).unwrap();
    println!(
        "{} actions, {} of {} interactables tried, {} distinct states, {} restarts",
        report.actions, report.unique_interactions, report.interactables_seen, report.visited_states, report.restarts
    );
    let mut by_oracle = std::collections::BTreeMap::new();
    for v in &report.violations {
        by_oracle.entry(v.oracle.as_str()).or_insert_with(Vec::new).push(v);
    }
    for (oracle, hits) in by_oracle {
        println!("  {oracle}: {} hit(s), first after action {}: {}", hits.len(), hits[0].action_index, hits[0].detail);
    }
}
