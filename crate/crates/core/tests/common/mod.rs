//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use gameagent::mbt::{simulate, Efsm, TestCase};
use gameagent::world::{Pos, WorldEntity, WorldModel};
use proptest::prelude::*;
use rand::Rng;

/// `walkable[y][x]` with each cell a wall with probability `wall_p`.
pub fn random_grid(rng: &mut impl Rng, width: usize, height: usize, wall_p: f64) -> Vec<Vec<bool>> {
    (0..height).map(|_| (0..width).map(|_| !rng.gen_bool(wall_p)).collect()).collect()
}

/// Breadth-first step counts from `src` over 4-adjacent walkable cells.
pub fn bfs(walkable: &[Vec<bool>], src: Pos) -> Vec<Vec<Option<u32>>> {
    let (h, w) = (walkable.len(), walkable[0].len());
    let mut dist = vec![vec![None; w]; h];
    let ok = |p: Pos| p.x >= 0 && p.y >= 0 && (p.x as usize) < w && (p.y as usize) < h && walkable[p.y as usize][p.x as usize];
    if !ok(src) {
        return dist;
    }
    dist[src.y as usize][src.x as usize] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(p) = queue.pop_front() {
        let d = dist[p.y as usize][p.x as usize].expect("queued cells have a distance");
        for n in p.neighbours4() {
            if ok(n) && dist[n.y as usize][n.x as usize].is_none() {
                dist[n.y as usize][n.x as usize] = Some(d + 1);
                queue.push_back(n);
            }
        }
    }
    dist
}

pub fn walkable_cells(walkable: &[Vec<bool>]) -> Vec<Pos> {
    let mut cells = Vec::new();
    for (y, row) in walkable.iter().enumerate() {
        for (x, &ok) in row.iter().enumerate() {
            if ok {
                cells.push(Pos::new(x as i32, y as i32));
            }
        }
    }
    cells
}

/// Random walk over the model that only takes transitions enabled after the
/// steps so far; stops early in a state with nothing enabled.
pub fn random_feasible_test(efsm: &Efsm, rng: &mut impl Rng, max_len: usize) -> TestCase {
    let len = rng.gen_range(1..=max_len);
    let mut test: TestCase = Vec::new();
    let mut state = efsm.initial_state();
    for _ in 0..len {
        let enabled: Vec<usize> = efsm
            .outgoing(state)
            .iter()
            .copied()
            .filter(|&t| {
                let mut next = test.clone();
                next.push(t);
                simulate(efsm, &next).is_ok_and(|s| s.feasible)
            })
            .collect();
        if enabled.is_empty() {
            break;
        }
        let t = enabled[rng.gen_range(0..enabled.len())];
        test.push(t);
        state = efsm.dst(t);
    }
    test
}

const IDS: [&str; 5] = ["e0", "e1", "e2", "e3", "e4"];

/// An entity with an id from a small pool so observations overlap.
pub fn arb_entity(timestamp: u64) -> impl Strategy<Value = WorldEntity> {
    (0..IDS.len(), prop::sample::select(vec!["monster", "scroll", "door"]), 0..8i32, 0..8i32, any::<bool>(), 0..20i64).prop_map(
        move |(i, ty, x, y, alive, hp)| {
            let mut e = WorldEntity::new(IDS[i], ty, Pos::new(x, y), timestamp).with("hp", hp);
            e.alive = alive;
            e
        },
    )
}

/// An observation stamped `timestamp` whose entities carry the same stamp.
pub fn arb_observation(timestamp: u64) -> impl Strategy<Value = WorldModel> {
    (prop::collection::vec(arb_entity(timestamp), 0..5), 0..8i32, 0..8i32).prop_map(move |(es, x, y)| {
        let mut w = WorldModel::new("agent", timestamp, Pos::new(x, y));
        for e in es {
            w.insert(e);
        }
        w
    })
}

/// Observations with non-decreasing timestamps.
pub fn arb_observation_run() -> impl Strategy<Value = Vec<WorldModel>> {
    prop::collection::vec(0..3u64, 1..6).prop_flat_map(|gaps| {
        let mut t = 0;
        let stamps: Vec<u64> = gaps
            .into_iter()
            .map(|g| {
                t += g;
                t
            })
            .collect();
        stamps.into_iter().map(arb_observation).collect::<Vec<_>>()
    })
}

/// Folds `run` into an empty belief.
pub fn merged(run: &[WorldModel]) -> WorldModel {
    let mut belief = WorldModel::new("agent", 0, Pos::new(0, 0));
    for obs in run {
        belief.merge_in(obs).expect("runs are in order");
    }
    belief
}

/// Checks the four merge laws for `run` followed by `obs`; `Err` names the broken law.
pub fn check_merge_laws(run: &[WorldModel], obs: &WorldModel) -> Result<(), String> {
    let belief = merged(run);
    let once = belief.merge(obs).map_err(|e| format!("in-order merge rejected: {e}"))?;
    let twice = once.merge(obs).map_err(|e| format!("re-merge rejected: {e}"))?;
    if once != twice {
        return Err("idempotence: merging twice differs from merging once".into());
    }
    if once.timestamp < belief.timestamp {
        return Err("monotonicity: belief timestamp went backwards".into());
    }
    for (id, old) in &belief.entities {
        let new = &once.entities[id];
        if new.timestamp < old.timestamp {
            return Err(format!("monotonicity: {id} timestamp went backwards"));
        }
        if !obs.entities.contains_key(id) && new != old {
            return Err(format!("stale retention: unobserved {id} changed"));
        }
    }
    for (id, seen) in &obs.entities {
        let Some(kept) = once.entities.get(id) else {
            return Err(format!("observed {id} is missing"));
        };
        if kept != seen {
            return Err(format!("replacement: {id} differs from the observation"));
        }
        if !seen.alive {
            // A later observation that omits the entity keeps the tombstone.
            let later = WorldModel::new("agent", obs.timestamp + 1, obs.agent_position);
            let after = once.merge(&later).map_err(|e| e.to_string())?;
            if after.entities.get(id).is_none_or(|e| e.alive) {
                return Err(format!("tombstoning: dead {id} was dropped or revived"));
            }
        }
    }
    if obs.timestamp > 0 {
        let stale = WorldModel::new("agent", obs.timestamp - 1, obs.agent_position);
        if once.merge(&stale).is_ok() {
            return Err("monotonicity: an older observation was accepted".into());
        }
    }
    Ok(())
}

/// An in-order run and one more observation no older than its last.
pub fn arb_run_and_next() -> impl Strategy<Value = (Vec<WorldModel>, WorldModel)> {
    (arb_observation_run(), 0..3u64).prop_flat_map(|(run, gap)| {
        let t = run.last().map_or(0, |o| o.timestamp) + gap;
        (Just(run), arb_observation(t))
    })
}
