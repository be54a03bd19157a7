use gameagent::env::Environment;
use gameagent::games::maze::{AGENT_ID, PRESS};
use gameagent::games::{generate_level, DungeonConfig, GameStatus, LevelParams, MiniDungeon};
use proptest::prelude::*;

fn keys() -> impl Strategy<Value = Vec<char>> {
    prop::collection::vec(prop::sample::select(vec!['w', 'a', 's', 'd', 'e', 'r']), 1..300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correct_dungeon_never_trips_its_assertions(seed in 0..10_000u64, keys in keys(), players in 1..=2usize) {
        let config = DungeonConfig { seed, player_count: players, ..DungeonConfig::default() };
        let mut game = MiniDungeon::new(config).unwrap().with_debug(true);
        for (i, k) in keys.into_iter().enumerate() {
            if game.status() != GameStatus::Running {
                break;
            }
            let id = game.players()[i % players].id.clone();
            let _ = game.command(&id, k);
            for p in game.players() {
                prop_assert!(p.bag.len() <= p.bag_capacity);
                prop_assert!(p.hp <= p.hp_max);
            }
        }
        prop_assert!(game.implanted_violations().is_empty(), "{:?}", game.implanted_violations());
    }

    #[test]
    fn doors_open_iff_wired_presses_are_odd(seed in 0..50u64, keys in keys()) {
        let mut maze = generate_level(&LevelParams { seed, ..LevelParams::default() }).unwrap().maze;
        for k in keys.into_iter().map(|k| if k == 'r' { PRESS } else { k }) {
            maze.command(AGENT_ID, k).unwrap();
        }
        for &d in maze.doors().keys() {
            let presses: u64 = maze.wiring().iter().filter(|w| w.1 == d).map(|w| maze.press_count(w.0)).sum();
            prop_assert_eq!(maze.is_open(d), presses % 2 == 1, "door {}", d);
        }
    }
}
