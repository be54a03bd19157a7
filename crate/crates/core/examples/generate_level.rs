//! Generate an L1-sized ButtonMaze level and print its model size.

use gameagent::games::{generate_level, LevelParams};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let level = generate_level(&LevelParams::l1(seed)).expect("L1 parameters are feasible");
    println!(
        "states={} transitions={} variables={}",
        level.efsm.state_count(),
        level.efsm.transition_count(),
        level.efsm.variables().len()
    );
    println!("{}", level.csv.lines().take(12).collect::<Vec<_>>().join("\n"));
}
