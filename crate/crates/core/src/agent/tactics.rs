//! Reusable navigation and interaction tactics over the belief's navigation graph.

use super::belief::Belief;
use super::tactic::{Command, Tactic};
use crate::world::Pos;

/// Key for the first step of a shortest path from the agent onto `cell`.
pub fn step_onto(belief: &Belief, cell: Pos) -> Option<char> {
    let path = belief.path_to(cell)?;
    belief.first_step_key(&path)
}

/// Key for the first step towards a walkable cell 4-adjacent to `cell`.
pub fn step_next_to(belief: &Belief, cell: Pos) -> Option<char> {
    let path = belief.path_next_to(cell)?;
    belief.first_step_key(&path)
}

/// Key for the first step towards the closest reachable frontier node.
pub fn step_explore(belief: &Belief) -> Option<char> {
    let nav = belief.nav()?;
    let here = belief.agent_node()?;
    let target = nav.next_exploration_target(here).ok().flatten()?;
    if target == here {
        return None;
    }
    let path = nav.find_path(here, target).ok().flatten()?;
    belief.first_step_key(&path)
}

/// Moves along a shortest known path onto `cell`; disabled when there or no path is known.
pub fn navigate_to(cell: Pos) -> Tactic {
    Tactic::action(format!("navigateTo{cell}"), move |b| step_onto(b, cell).map(Command::key))
}

/// Moves onto the believed square of a live entity.
pub fn navigate_onto(id: impl Into<String>) -> Tactic {
    let id = id.into();
    Tactic::action(format!("navigateOnto({id})"), move |b| {
        let cell = b.entity_here(&id)?.position;
        step_onto(b, cell).map(Command::key)
    })
}

/// Moves to a square next to the believed position of a live entity.
pub fn navigate_next_to(id: impl Into<String>) -> Tactic {
    let id = id.into();
    Tactic::action(format!("navigateNextTo({id})"), move |b| {
        let cell = b.entity_here(&id)?.position;
        if b.position().is_adjacent4(cell) {
            return None;
        }
        step_next_to(b, cell).map(Command::key)
    })
}

/// Heads for the closest unexplored area; disabled when no frontier is reachable.
pub fn explore() -> Tactic {
    Tactic::action("explore", |b| step_explore(b).map(Command::key))
}

/// Bumps into the adjacent entity `id`.
pub fn bump(id: impl Into<String>) -> Tactic {
    let id = id.into();
    Tactic::action(format!("bump({id})"), move |b| {
        let cell = b.entity_here(&id)?.position;
        let key = b.position().key_towards(cell)?;
        Some(Command::key(key).interacting_with(id.clone()))
    })
}

/// Sends `key` while standing on the entity `id`.
pub fn press(id: impl Into<String>, key: char) -> Tactic {
    let id = id.into();
    Tactic::action(format!("press({id})"), move |b| {
        let e = b.entity_here(&id)?;
        (e.position == b.position()).then(|| Command::key(key).interacting_with(id.clone()))
    })
}

/// Goes onto the entity and presses `key` there.
pub fn reach_and_press(id: impl Into<String>, key: char) -> Tactic {
    let id = id.into();
    Tactic::first_of(vec![press(id.clone(), key), navigate_onto(id), explore(), Tactic::Abort])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{WorldEntity, WorldModel};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Row-major tiles: '.' floor, '#' wall, 'B' floor holding a button.
    fn belief_of(rows: &[&str], at: Pos) -> Belief {
        let mut obs = WorldModel::new("a", 1, at);
        for (y, row) in rows.iter().enumerate() {
            for (x, c) in row.chars().enumerate() {
                let p = Pos::new(x as i32, y as i32);
                let walkable = c != '#';
                obs.insert(
                    WorldEntity::new(format!("t{x}_{y}"), if walkable { "floor" } else { "wall" }, p, 1)
                        .with("walkable", walkable),
                );
                if c == 'B' {
                    obs.insert(WorldEntity::new("b0", "button", p, 1));
                }
            }
        }
        let mut b = Belief::new("a");
        b.absorb(&obs).unwrap();
        b
    }

    #[test]
    fn navigation_steps_along_the_path() {
        let b = belief_of(&["#####", "#..B#", "#####"], Pos::new(1, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tactic = reach_and_press("b0", 'e');
        let sel = tactic.select(&b, &mut rng).unwrap();
        assert_eq!(sel.name(), "navigateOnto(b0)");
        assert!(matches!(sel, crate::agent::Selection::Act { command, .. } if command.key == 'd'));
    }

    #[test]
    fn press_when_on_target() {
        let b = belief_of(&["#####", "#..B#", "#####"], Pos::new(3, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tactic = reach_and_press("b0", 'e');
        let sel = tactic.select(&b, &mut rng).unwrap();
        assert_eq!(sel.name(), "press(b0)");
    }

    #[test]
    fn fully_known_room_has_nothing_to_explore() {
        let b = belief_of(&["#####", "#...#", "#####"], Pos::new(1, 1));
        assert_eq!(step_explore(&b), None);
        let open = belief_of(&["####", "#...", "####"], Pos::new(1, 1));
        assert_eq!(step_explore(&open), Some('d'));
    }
}
