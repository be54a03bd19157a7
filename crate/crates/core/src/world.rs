//! Observed game state: entities, world models and belief merging.
//!
//! A [`WorldModel`] is used both for a single observation returned by a game
//! and for the accumulated belief of an agent. Merging an observation into a
//! belief keeps entities that went out of view (stale belief) and keeps
//! destroyed entities as tombstones.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Integer grid coordinate. `y` grows downwards, so moving "up" decrements it.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Pos {
    pub x: i32,
    pub y: i32,
}

impl Pos {
    pub const fn new(x: i32, y: i32) -> Self {
        Pos { x, y }
    }

    pub fn manhattan(self, other: Pos) -> i32 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }

    pub fn chebyshev(self, other: Pos) -> i32 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    /// The four orthogonal neighbours in key order up, left, down, right.
    pub fn neighbours4(self) -> [Pos; 4] {
        [
            Pos::new(self.x, self.y - 1),
            Pos::new(self.x - 1, self.y),
            Pos::new(self.x, self.y + 1),
            Pos::new(self.x + 1, self.y),
        ]
    }

    pub fn is_adjacent4(self, other: Pos) -> bool {
        self.manhattan(other) == 1
    }

    /// Square reached by a movement key (`w`, `a`, `s`, `d`).
    pub fn step(self, key: char) -> Option<Pos> {
        match key {
            'w' => Some(Pos::new(self.x, self.y - 1)),
            'a' => Some(Pos::new(self.x - 1, self.y)),
            's' => Some(Pos::new(self.x, self.y + 1)),
            'd' => Some(Pos::new(self.x + 1, self.y)),
            _ => None,
        }
    }

    /// Movement key that takes `self` to the 4-adjacent square `to`.
    pub fn key_towards(self, to: Pos) -> Option<char> {
        match (to.x - self.x, to.y - self.y) {
            (0, -1) => Some('w'),
            (-1, 0) => Some('a'),
            (0, 1) => Some('s'),
            (1, 0) => Some('d'),
            _ => None,
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Scalar property value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl Value {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<i32> for Value {
    fn from(i: i32) -> Self {
        Value::Int(i64::from(i))
    }
}

impl From<u32> for Value {
    fn from(i: u32) -> Self {
        Value::Int(i64::from(i))
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

pub type Properties = BTreeMap<String, Value>;

/// One observed game object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WorldEntity {
    pub id: String,
    pub entity_type: String,
    pub position: Pos,
    pub timestamp: u64,
    #[serde(default)]
    pub properties: Properties,
    pub alive: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_entities: Vec<WorldEntity>,
}

impl WorldEntity {
    pub fn new(id: impl Into<String>, entity_type: impl Into<String>, position: Pos, timestamp: u64) -> Self {
        WorldEntity {
            id: id.into(),
            entity_type: entity_type.into(),
            position,
            timestamp,
            properties: Properties::new(),
            alive: true,
            sub_entities: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.properties.insert(name.to_string(), value.into());
        self
    }

    pub fn dead(mut self) -> Self {
        self.alive = false;
        self
    }

    pub fn prop(&self, name: &str) -> Option<&Value> {
        self.properties.get(name)
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        self.prop(name).and_then(Value::as_int)
    }

    /// Boolean property, `false` when absent.
    pub fn flag(&self, name: &str) -> bool {
        self.prop(name).and_then(Value::as_bool).unwrap_or(false)
    }

    pub fn string(&self, name: &str) -> Option<&str> {
        self.prop(name).and_then(Value::as_str)
    }

    /// Game level the entity lives on; entities without a `level` property are on level 0.
    pub fn level(&self) -> i64 {
        self.int("level").unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("out-of-order observation: observation at turn {observation} is older than belief at turn {belief}")]
    OutOfOrder { belief: u64, observation: u64 },
}

/// Snapshot of observable game state, or an agent's accumulated belief.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WorldModel {
    pub agent_id: String,
    pub timestamp: u64,
    pub entities: BTreeMap<String, WorldEntity>,
    pub agent_position: Pos,
    pub agent_properties: Properties,
}

impl WorldModel {
    pub fn new(agent_id: impl Into<String>, timestamp: u64, agent_position: Pos) -> Self {
        WorldModel {
            agent_id: agent_id.into(),
            timestamp,
            agent_position,
            ..WorldModel::default()
        }
    }

    pub fn insert(&mut self, entity: WorldEntity) {
        self.entities.insert(entity.id.clone(), entity);
    }

    pub fn with_entity(mut self, entity: WorldEntity) -> Self {
        self.insert(entity);
        self
    }

    pub fn entity(&self, id: &str) -> Option<&WorldEntity> {
        self.entities.get(id)
    }

    pub fn agent_int(&self, name: &str) -> Option<i64> {
        self.agent_properties.get(name).and_then(Value::as_int)
    }

    pub fn agent_str(&self, name: &str) -> Option<&str> {
        self.agent_properties.get(name).and_then(Value::as_str)
    }

    /// Level the agent is on (`currentLevel`, default 0).
    pub fn current_level(&self) -> i64 {
        self.agent_int("currentLevel").unwrap_or(0)
    }

    /// Entities on the agent's current level, optionally skipping tombstones.
    pub fn on_current_level(&self, alive_only: bool) -> impl Iterator<Item = &WorldEntity> {
        let level = self.current_level();
        self.entities
            .values()
            .filter(move |e| e.level() == level && (!alive_only || e.alive))
    }

    pub fn of_type<'a>(&'a self, entity_type: &'a str, alive_only: bool) -> impl Iterator<Item = &'a WorldEntity> + 'a {
        self.entities
            .values()
            .filter(move |e| e.entity_type == entity_type && (!alive_only || e.alive))
    }

    /// Merges a newer observation into this belief, in place.
    ///
    /// Entities in the observation replace older entries with the same id,
    /// entities missing from the observation are kept as they were, and
    /// destroyed entities (`alive == false`) are kept as tombstones.
    pub fn merge_in(&mut self, obs: &WorldModel) -> Result<(), MergeError> {
        if obs.timestamp < self.timestamp {
            return Err(MergeError::OutOfOrder {
                belief: self.timestamp,
                observation: obs.timestamp,
            });
        }
        for (id, seen) in &obs.entities {
            match self.entities.get_mut(id) {
                Some(known) if known.timestamp > seen.timestamp => {}
                Some(known) => *known = seen.clone(),
                None => {
                    self.entities.insert(id.clone(), seen.clone());
                }
            }
        }
        if self.agent_id.is_empty() {
            self.agent_id = obs.agent_id.clone();
        }
        self.timestamp = obs.timestamp;
        self.agent_position = obs.agent_position;
        self.agent_properties = obs.agent_properties.clone();
        Ok(())
    }

    /// Pure form of [`WorldModel::merge_in`].
    pub fn merge(&self, obs: &WorldModel) -> Result<WorldModel, MergeError> {
        let mut merged = self.clone();
        merged.merge_in(obs)?;
        Ok(merged)
    }

    /// Hash of the full model; equal models have equal digests.
    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.timestamp.hash(&mut h);
        self.agent_position.hash(&mut h);
        self.agent_properties.hash(&mut h);
        for e in self.entities.values() {
            hash_entity(e, &mut h);
        }
        h.finish()
    }
}

fn hash_entity(e: &WorldEntity, h: &mut DefaultHasher) {
    e.id.hash(h);
    e.entity_type.hash(h);
    e.position.hash(h);
    e.timestamp.hash(h);
    e.alive.hash(h);
    e.properties.hash(h);
    for sub in &e.sub_entities {
        hash_entity(sub, h);
    }
}
