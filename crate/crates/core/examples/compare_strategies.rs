//! Compare random, (μ+λ) and MOSA transition coverage on a generated L1-sized model.

use std::time::Instant;

use gameagent::games::{generate_level, LevelParams};
use gameagent::mbt::{generate, Budget, SearchConfig, Strategy};

fn main() {
    let mut args = std::env::args().skip(1);
    let level_seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let evaluations = args.next().and_then(|s| s.parse().ok()).unwrap_or(50_000);
    let level = generate_level(&LevelParams::l1(level_seed)).expect("L1 parameters are feasible");
    println!("model: {} transitions", level.efsm.transition_count());
    for strategy in Strategy::ALL {
        let started = Instant::now();
        let suite = generate(&level.efsm, &SearchConfig::new(strategy, Budget::Evaluations(evaluations), 1))
            .expect("valid search configuration");
        println!(
            "{:<13} coverage {:.3}  tests {:>3}  {:.2}s",
            strategy.name(),
            suite.coverage,
            suite.tests.len(),
            started.elapsed().as_secs_f64()
        );
    }
}
