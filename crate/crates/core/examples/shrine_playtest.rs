//! Run the two-shrine MiniDungeon playtest over a range of seeds and report
//! wins, cycles used and oracle violations.

use gameagent::games::DungeonConfig;
use gameagent::playtest::{run_playtest, PlaytestConfig};

fn main() {
    let seeds: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(25);
    let mut wins = 0;
    for seed in 0..seeds {
        let config = PlaytestConfig::new(DungeonConfig { seed, ..DungeonConfig::default() });
        let (report, agent) = run_playtest(&config).expect("default dungeon is feasible");
        wins += usize::from(report.won);
        let goal = agent.trace().last().and_then(|t| t.goal.clone()).unwrap_or_default();
        println!(
            "seed {seed:>2}: {:<7} cycles {:>4} score {:>3} violations {} last goal {goal}",
            report.status,
            report.cycles,
            report.score,
            report.violations.iter().map(|v| v.oracle.as_str()).collect::<Vec<_>>().join(","),
        );
    }
    println!("won {wins}/{seeds}");
}
