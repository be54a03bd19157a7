use std::collections::{BTreeMap, BTreeSet};

use crate::nav::{NavGraph, NodeId, Path};
use crate::world::{MergeError, Pos, WorldEntity, WorldModel};

/// Agent-side bookkeeping that is not part of any observation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Memory {
    tried: BTreeSet<String>,
    discovered: BTreeMap<String, u64>,
    interactions: BTreeMap<String, u32>,
    next_discovery: u64,
}

impl Memory {
    pub fn is_tried(&self, id: &str) -> bool {
        self.tried.contains(id)
    }

    pub fn mark_tried(&mut self, id: &str) {
        self.tried.insert(id.to_string());
    }

    pub fn tried(&self) -> &BTreeSet<String> {
        &self.tried
    }

    /// Order in which an entity id was first observed (0 = first).
    pub fn discovery_rank(&self, id: &str) -> Option<u64> {
        self.discovered.get(id).copied()
    }

    pub fn interactions(&self, id: &str) -> u32 {
        self.interactions.get(id).copied().unwrap_or(0)
    }

    /// Ids with at least one recorded interaction, sorted.
    pub fn interacted(&self) -> impl Iterator<Item = &str> {
        self.interactions.keys().map(String::as_str)
    }

    pub fn record_interaction(&mut self, id: &str) {
        *self.interactions.entry(id.to_string()).or_default() += 1;
    }

    fn note_discoveries(&mut self, obs: &WorldModel) {
        for id in obs.entities.keys() {
            if !self.discovered.contains_key(id) {
                self.discovered.insert(id.clone(), self.next_discovery);
                self.next_discovery += 1;
            }
        }
    }
}

/// Everything guards and goal predicates may look at: the merged world
/// model, one on-the-fly navigation graph per game level, and memory.
#[derive(Clone, Debug, Default)]
pub struct Belief {
    pub world: WorldModel,
    pub memory: Memory,
    nav: BTreeMap<i64, NavGraph>,
}

impl Belief {
    pub fn new(agent_id: impl Into<String>) -> Self {
        Belief {
            world: WorldModel { agent_id: agent_id.into(), ..WorldModel::default() },
            ..Belief::default()
        }
    }

    pub fn agent_id(&self) -> &str {
        &self.world.agent_id
    }

    /// Merges an observation and grows the navigation graph of its level.
    pub fn absorb(&mut self, obs: &WorldModel) -> Result<(), MergeError> {
        self.world.merge_in(obs)?;
        self.memory.note_discoveries(obs);
        self.nav
            .entry(obs.current_level())
            .or_insert_with(NavGraph::incremental)
            .add_observed_geometry(obs);
        Ok(())
    }

    /// Navigation graph of the agent's current level.
    pub fn nav(&self) -> Option<&NavGraph> {
        self.nav.get(&self.world.current_level())
    }

    pub fn position(&self) -> Pos {
        self.world.agent_position
    }

    pub fn agent_node(&self) -> Option<NodeId> {
        self.nav()?.node_at(self.position())
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        self.world.agent_int(name)
    }

    /// Live entity on the agent's current level.
    pub fn entity_here(&self, id: &str) -> Option<&WorldEntity> {
        self.world
            .entity(id)
            .filter(|e| e.alive && e.level() == self.world.current_level())
    }

    pub fn path_to(&self, cell: Pos) -> Option<Path> {
        let nav = self.nav()?;
        let (src, dst) = (nav.node_at(self.position())?, nav.node_at(cell)?);
        nav.find_path(src, dst).ok().flatten()
    }

    /// Shortest path to any walkable cell 4-adjacent to `cell`.
    pub fn path_next_to(&self, cell: Pos) -> Option<Path> {
        let nav = self.nav()?;
        let src = nav.node_at(self.position())?;
        let targets: Vec<NodeId> = cell.neighbours4().iter().filter_map(|&c| nav.node_at(c)).collect();
        if targets.is_empty() {
            return None;
        }
        nav.find_path_to_any(src, &targets).ok().flatten()
    }

    /// Movement key for the first step of `path`.
    pub fn first_step_key(&self, path: &Path) -> Option<char> {
        let next = self.nav()?.cell(path.next_hop()?)?;
        self.position().key_towards(next)
    }

    /// Live entities held by the agent (`holder` equals the agent id),
    /// in bag order when the game reports `bagContents`.
    pub fn held(&self) -> Vec<&WorldEntity> {
        let me = self.agent_id();
        let mut held: Vec<&WorldEntity> = self
            .world
            .entities
            .values()
            .filter(|e| e.alive && e.string("holder") == Some(me))
            .collect();
        if let Some(bag) = self.world.agent_str("bagContents") {
            let order: Vec<&str> = bag.split(',').filter(|s| !s.is_empty()).collect();
            held.retain(|e| order.contains(&e.id.as_str()));
            held.sort_by_key(|e| order.iter().position(|&o| o == e.id));
        }
        held
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Environment;
    use crate::games::maze::AGENT_ID;
    use crate::games::ButtonMaze;

    const LEVEL: &str = "\
w,w,w,w,w,w
w,b0,f,d0,b1,w
w,w,w,w,w,w

b0,d0
";

    #[test]
    fn closed_doors_cut_paths_until_they_open() {
        let mut maze = ButtonMaze::load_csv(LEVEL).unwrap();
        let mut b = Belief::new(AGENT_ID);
        b.absorb(&maze.observe(AGENT_ID).unwrap()).unwrap();
        let b1 = b.world.entity("b1").unwrap().position;
        assert!(b.path_to(b1).is_none());
        assert!(b.path_next_to(Pos::new(3, 1)).is_some());
        b.absorb(&maze.command(AGENT_ID, 'e').unwrap()).unwrap();
        assert_eq!(b.path_to(b1).map(|p| p.cost), Some(3.0));
    }

    #[test]
    fn discovery_ranks_follow_first_sight() {
        let mut maze = ButtonMaze::load_csv(LEVEL).unwrap();
        let mut b = Belief::new(AGENT_ID);
        b.absorb(&maze.observe(AGENT_ID).unwrap()).unwrap();
        let rank = b.memory.discovery_rank("b1").unwrap();
        b.absorb(&maze.command(AGENT_ID, 'd').unwrap()).unwrap();
        assert_eq!(b.memory.discovery_rank("b1"), Some(rank));
        assert_eq!(b.memory.discovery_rank("nobody"), None);
    }

    #[test]
    fn entity_here_ignores_other_levels_and_the_dead() {
        let mut w = WorldModel::new("P1", 1, Pos::new(0, 0));
        w.agent_properties.insert("level".into(), 0i64.into());
        w.insert(WorldEntity::new("a", "scroll", Pos::new(1, 0), 1).with("level", 0));
        w.insert(WorldEntity::new("b", "scroll", Pos::new(1, 0), 1).with("level", 1));
        w.insert(WorldEntity::new("c", "monster", Pos::new(1, 0), 1).with("level", 0).dead());
        let mut b = Belief::new("P1");
        b.absorb(&w).unwrap();
        assert!(b.entity_here("a").is_some());
        assert!(b.entity_here("b").is_none());
        assert!(b.entity_here("c").is_none());
    }
}
