mod common;

use common::{arb_observation_run, arb_run_and_next, check_merge_laws, merged};
use gameagent::agent::Belief;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn merge_laws_hold((run, obs) in arb_run_and_next()) {
        prop_assert_eq!(check_merge_laws(&run, &obs), Ok(()));
    }

    #[test]
    fn belief_absorb_matches_world_merge(run in arb_observation_run()) {
        let mut belief = Belief::new("agent");
        for obs in &run {
            belief.absorb(obs).unwrap();
        }
        prop_assert_eq!(&belief.world, &merged(&run));
    }
}
