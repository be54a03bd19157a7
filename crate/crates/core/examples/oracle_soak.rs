//! Random soak of MiniDungeon with implanted assertions, with and without the
//! buggy monster movement fault.

use gameagent::games::{DungeonConfig, Mutant};
use gameagent::playtest::{oracle_soak, SoakConfig};

fn main() {
    for mutants in [vec![], vec![Mutant::BuggyMonsterMove]] {
        let mut first = Vec::new();
        for seed in 0..20 {
            let config = SoakConfig { dungeon: DungeonConfig { seed, ..DungeonConfig::default() }, turns: 2000, mutants: mutants.clone() };
            let report = oracle_soak(&config).expect("default dungeon is feasible");
            first.push(report.first_violation_turn);
        }
        let caught = first.iter().filter(|t| t.is_some()).count();
        println!("mutants {mutants:?}: violations on {caught}/20 seeds, first turns {first:?}");
    }
}
