//! MiniDungeon: a turn-based roguelike with levels, monsters, potions,
//! scrolls and shrines.
//!
//! Each level has exactly one shrine. Bumping it while carrying a scroll
//! uses the first scroll in the bag; only the level's holy scroll cleanses
//! the shrine. A cleansed shrine is a portal to the next level, and
//! cleansing the shrine of the last level wins the game.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, VecDeque};
use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Mutant;
use crate::env::{EnvError, Environment};
use crate::world::{Pos, WorldEntity, WorldModel};

pub const PLAYER_HP: i64 = 20;
pub const PLAYER_DAMAGE: i64 = 1;
pub const RAGED_DAMAGE: i64 = 2;
pub const MONSTER_HP: i64 = 3;
pub const MONSTER_DAMAGE: i64 = 1;
pub const HEAL_AMOUNT: i64 = 5;
pub const RAGE_TURNS: i64 = 9;
const WALL_DENSITY: f64 = 0.2;
const KILL_SCORE: i64 = 10;
const CLEANSE_SCORE: i64 = 100;

/// Keys understood by MiniDungeon. `.` lets a player pass its turn.
pub const KEYS: [char; 8] = ['w', 'a', 's', 'd', 'e', 'r', 'q', '.'];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct DungeonConfig {
    pub level_count: usize,
    pub grid_size: usize,
    pub monsters_per_level: usize,
    pub scrolls_per_level: usize,
    /// Heal potions per level.
    pub heal_potions: usize,
    /// Rage potions per level.
    pub rage_potions: usize,
    pub player_count: usize,
    pub bag_capacity: usize,
    pub view_distance: usize,
    pub seed: u64,
}

impl Default for DungeonConfig {
    fn default() -> Self {
        DungeonConfig {
            level_count: 2,
            grid_size: 20,
            monsters_per_level: 4,
            scrolls_per_level: 3,
            heal_potions: 2,
            rage_potions: 1,
            player_count: 1,
            bag_capacity: 2,
            view_distance: 3,
            seed: 0,
        }
    }
}

impl DungeonConfig {
    pub fn validate(&self) -> Result<(), DungeonError> {
        let bad = |m: &str| Err(DungeonError::InvalidConfig(m.to_string()));
        if self.level_count == 0 {
            return bad("levelCount must be at least 1");
        }
        if self.grid_size < 5 {
            return bad("gridSize must be at least 5");
        }
        if !(1..=2).contains(&self.player_count) {
            return bad("playerCount must be 1 or 2");
        }
        if !(1..=2).contains(&self.bag_capacity) {
            return bad("bagCapacity must be 1 or 2");
        }
        if self.view_distance == 0 {
            return bad("viewDistance must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DungeonError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("level {level} needs {needed} free floor squares but has {available}")]
    Infeasible { level: usize, needed: usize, available: usize },
    #[error("layout: {0}")]
    Layout(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GameStatus {
    Running,
    Won,
    Lost,
    Quit,
}

impl GameStatus {
    pub fn name(self) -> &'static str {
        match self {
            GameStatus::Running => "running",
            GameStatus::Won => "won",
            GameStatus::Lost => "lost",
            GameStatus::Quit => "quit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Level {
    /// `walls[y][x]`.
    pub walls: Vec<Vec<bool>>,
    pub start: Pos,
    pub shrine: Pos,
    pub cleansed: bool,
}

impl Level {
    fn width(&self) -> i32 {
        self.walls[0].len() as i32
    }

    fn height(&self) -> i32 {
        self.walls.len() as i32
    }

    fn in_bounds(&self, p: Pos) -> bool {
        p.x >= 0 && p.y >= 0 && p.x < self.width() && p.y < self.height()
    }

    pub fn is_wall(&self, p: Pos) -> bool {
        !self.in_bounds(p) || self.walls[p.y as usize][p.x as usize]
    }

    fn is_border(&self, p: Pos) -> bool {
        p.x <= 0 || p.y <= 0 || p.x >= self.width() - 1 || p.y >= self.height() - 1
    }

    pub fn floor_cells(&self) -> Vec<Pos> {
        let mut cells = Vec::new();
        for y in 0..self.height() {
            for x in 0..self.width() {
                let p = Pos::new(x, y);
                if !self.is_wall(p) {
                    cells.push(p);
                }
            }
        }
        cells
    }

    /// Floor squares reachable from `from` without entering `avoid`.
    pub fn reachable(&self, from: Pos, avoid: Option<Pos>) -> BTreeSet<Pos> {
        let mut seen = BTreeSet::new();
        if self.is_wall(from) || Some(from) == avoid {
            return seen;
        }
        let mut queue = VecDeque::from([from]);
        seen.insert(from);
        while let Some(p) = queue.pop_front() {
            for n in p.neighbours4() {
                if !self.is_wall(n) && Some(n) != avoid && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Player {
    pub id: String,
    pub pos: Pos,
    pub level: usize,
    pub hp: i64,
    pub hp_max: i64,
    /// Indices into the item list, in pickup order.
    pub bag: Vec<usize>,
    pub bag_capacity: usize,
    pub score: i64,
    pub rage_turns_left: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Monster {
    pub id: String,
    pub pos: Pos,
    pub level: usize,
    pub hp: i64,
    pub alive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ItemKind {
    Scroll { holy: bool },
    HealPotion,
    RagePotion,
}

impl ItemKind {
    pub fn type_name(self) -> &'static str {
        match self {
            ItemKind::Scroll { .. } => "scroll",
            ItemKind::HealPotion => "healPotion",
            ItemKind::RagePotion => "ragePotion",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Item {
    pub id: String,
    pub kind: ItemKind,
    pub level: usize,
    pub pos: Pos,
    /// Player index currently carrying the item.
    pub holder: Option<usize>,
    /// Player index that used the item up.
    pub consumed_by: Option<usize>,
}

impl Item {
    fn on_floor(&self) -> bool {
        self.holder.is_none() && self.consumed_by.is_none()
    }
}

/// MiniDungeon game state. Owns its random stream; identical config, seed
/// and command sequence give identical states.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MiniDungeon {
    config: DungeonConfig,
    levels: Vec<Level>,
    players: Vec<Player>,
    monsters: Vec<Monster>,
    items: Vec<Item>,
    turn: u64,
    status: GameStatus,
    next_player: usize,
    mutants: BTreeSet<Mutant>,
    debug: bool,
    violations: Vec<String>,
    #[serde(skip)]
    rng: ChaCha8Rng,
}

impl MiniDungeon {
    /// Generates a seeded game: bordered levels with random interior walls,
    /// every floor square reachable from the start, one shrine and one holy
    /// scroll per level, objects on distinct floor squares.
    pub fn new(config: DungeonConfig) -> Result<Self, DungeonError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut levels = Vec::new();
        let mut monsters = Vec::new();
        let mut items = Vec::new();
        for l in 0..config.level_count {
            let level = generate_layout(&config, &mut rng);
            let mut free: Vec<Pos> = level
                .floor_cells()
                .into_iter()
                .filter(|&p| p != level.shrine && p.manhattan(level.start) > 1)
                .collect();
            let needed = config.monsters_per_level + config.scrolls_per_level + config.heal_potions + config.rage_potions;
            if needed > free.len() {
                return Err(DungeonError::Infeasible { level: l, needed, available: free.len() });
            }
            free.shuffle(&mut rng);
            // Monsters prefer squares away from the start.
            free.sort_by_key(|p| p.manhattan(level.start) <= 3);
            for i in 0..config.monsters_per_level {
                monsters.push(Monster { id: format!("M{l}_{i}"), pos: free.remove(0), level: l, hp: MONSTER_HP, alive: true });
            }
            free.shuffle(&mut rng);
            let holy = if config.scrolls_per_level > 0 { rng.gen_range(0..config.scrolls_per_level) } else { 0 };
            let kinds = (0..config.scrolls_per_level)
                .map(|i| ("S", i, ItemKind::Scroll { holy: i == holy }))
                .chain((0..config.heal_potions).map(|i| ("H", i, ItemKind::HealPotion)))
                .chain((0..config.rage_potions).map(|i| ("R", i, ItemKind::RagePotion)));
            for (prefix, i, kind) in kinds {
                items.push(Item {
                    id: format!("{prefix}{l}_{i}"),
                    kind,
                    level: l,
                    pos: free.pop().expect("checked above"),
                    holder: None,
                    consumed_by: None,
                });
            }
            levels.push(level);
        }
        let players = (0..config.player_count)
            .map(|i| new_player(i, Pos::new(1, 1 + i as i32), config.bag_capacity))
            .collect();
        Ok(MiniDungeon {
            config,
            levels,
            players,
            monsters,
            items,
            turn: 0,
            status: GameStatus::Running,
            next_player: 0,
            mutants: BTreeSet::new(),
            debug: false,
            violations: Vec::new(),
            rng,
        })
    }

    /// Builds a game from hand-drawn levels. Characters: `#` wall, `.` floor,
    /// `1`/`2` player starts (level 0 only), `M` monster, `S` holy scroll,
    /// `x` ordinary scroll, `h` heal potion, `r` rage potion, `$` shrine.
    /// Each level needs exactly one shrine. Player starts on later levels
    /// default to the top-left floor square.
    pub fn from_layout(levels: &[&[&str]], config: DungeonConfig) -> Result<Self, DungeonError> {
        let mut game = MiniDungeon::new(DungeonConfig {
            level_count: 1,
            grid_size: 5,
            monsters_per_level: 0,
            scrolls_per_level: 0,
            heal_potions: 0,
            rage_potions: 0,
            ..config.clone()
        })?;
        game.config = DungeonConfig { level_count: levels.len(), ..config };
        game.levels.clear();
        game.monsters.clear();
        game.items.clear();
        let mut starts = Vec::new();
        for (l, rows) in levels.iter().enumerate() {
            let width = rows.first().map_or(0, |r| r.len());
            if width == 0 || rows.iter().any(|r| r.len() != width) {
                return Err(DungeonError::Layout(format!("level {l} is empty or ragged")));
            }
            let mut walls = vec![vec![false; width]; rows.len()];
            let mut shrine = None;
            let mut counters = [0usize; 4];
            let mut start = None;
            for (y, row) in rows.iter().enumerate() {
                for (x, c) in row.chars().enumerate() {
                    let p = Pos::new(x as i32, y as i32);
                    let mut item = |prefix: &str, slot: usize, kind: ItemKind, items: &mut Vec<Item>| {
                        items.push(Item {
                            id: format!("{prefix}{l}_{}", counters[slot]),
                            kind,
                            level: l,
                            pos: p,
                            holder: None,
                            consumed_by: None,
                        });
                        counters[slot] += 1;
                    };
                    match c {
                        '#' => walls[y][x] = true,
                        '.' => {}
                        '1' | '2' if l == 0 => {
                            starts.push((c, p));
                            if c == '1' {
                                start = Some(p);
                            }
                        }
                        'M' => {
                            let i = game.monsters.iter().filter(|m| m.level == l).count();
                            game.monsters.push(Monster { id: format!("M{l}_{i}"), pos: p, level: l, hp: MONSTER_HP, alive: true });
                        }
                        'S' => item("S", 0, ItemKind::Scroll { holy: true }, &mut game.items),
                        'x' => item("S", 0, ItemKind::Scroll { holy: false }, &mut game.items),
                        'h' => item("H", 1, ItemKind::HealPotion, &mut game.items),
                        'r' => item("R", 2, ItemKind::RagePotion, &mut game.items),
                        '$' if shrine.is_none() => shrine = Some(p),
                        other => return Err(DungeonError::Layout(format!("unexpected {other:?} at level {l} {p}"))),
                    }
                }
            }
            let shrine = shrine.ok_or_else(|| DungeonError::Layout(format!("level {l} has no shrine")))?;
            let mut level = Level { walls, start: Pos::default(), shrine, cleansed: false };
            level.start = start.or_else(|| level.floor_cells().into_iter().find(|&p| p != shrine)).unwrap_or_default();
            game.levels.push(level);
        }
        starts.sort();
        let ids: Vec<Pos> = starts.iter().map(|&(_, p)| p).collect();
        if ids.len() != game.config.player_count {
            return Err(DungeonError::Layout(format!("expected {} player starts", game.config.player_count)));
        }
        game.players = ids.iter().enumerate().map(|(i, &p)| new_player(i, p, game.config.bag_capacity)).collect();
        Ok(game)
    }

    pub fn with_mutant(mut self, mutant: Mutant) -> Self {
        self.mutants.insert(mutant);
        self
    }

    /// Turns the implanted assertions on.
    pub fn with_debug(mut self, debug: bool) -> Self {
        self.debug = debug;
        self
    }

    pub fn config(&self) -> &DungeonConfig {
        &self.config
    }

    pub fn status(&self) -> GameStatus {
        self.status
    }

    pub fn turn(&self) -> u64 {
        self.turn
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn player(&self, id: &str) -> Option<&Player> {
        self.players.iter().find(|p| p.id == id)
    }

    pub fn monsters(&self) -> &[Monster] {
        &self.monsters
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// Id of the holy scroll of `level`.
    pub fn holy_scroll(&self, level: usize) -> Option<&str> {
        self.items
            .iter()
            .find(|i| i.level == level && i.kind == ItemKind::Scroll { holy: true })
            .map(|i| i.id.as_str())
    }

    /// Violations recorded by the implanted assertions so far.
    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    /// Full state as JSON, for debugging.
    pub fn dump_json(&self) -> String {
        serde_json::to_string(self).expect("state serializes")
    }

    /// Hash of the full state (including the random stream position).
    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.dump_json().hash(&mut h);
        self.rng.get_word_pos().hash(&mut h);
        h.finish()
    }

    /// Moves a player, for setting up scenarios.
    pub fn place_player(&mut self, id: &str, pos: Pos, level: usize) {
        if let Some(p) = self.players.iter_mut().find(|p| p.id == id) {
            p.pos = pos;
            p.level = level;
        }
    }

    /// Sets a player's hit points, for setting up scenarios.
    pub fn set_hp(&mut self, id: &str, hp: i64) {
        if let Some(p) = self.players.iter_mut().find(|p| p.id == id) {
            p.hp = hp.clamp(0, p.hp_max);
        }
    }

    fn player_index(&self, id: &str) -> Result<usize, EnvError> {
        self.players.iter().position(|p| p.id == id).ok_or_else(|| EnvError::UnknownAgent(id.to_string()))
    }

    fn monster_at(&self, level: usize, pos: Pos) -> Option<usize> {
        self.monsters.iter().position(|m| m.alive && m.level == level && m.pos == pos)
    }

    fn player_at(&self, level: usize, pos: Pos) -> Option<usize> {
        self.players.iter().position(|p| p.level == level && p.pos == pos)
    }

    /// Whether a square holds a player, a live monster or the shrine.
    fn occupied(&self, level: usize, pos: Pos) -> bool {
        self.levels[level].shrine == pos || self.monster_at(level, pos).is_some() || self.player_at(level, pos).is_some()
    }

    fn record(&mut self, message: String) {
        self.violations.push(format!("turn {}: {message}", self.turn));
    }

    fn player_command(&mut self, idx: usize, key: char) {
        let level = self.players[idx].level;
        match key {
            'q' => self.status = GameStatus::Quit,
            'e' => {
                if let Some(item) = self.take_from_bag(idx, |k| k == ItemKind::HealPotion) {
                    let p = &mut self.players[idx];
                    p.hp = (p.hp + HEAL_AMOUNT).min(p.hp_max);
                    self.items[item].consumed_by = Some(idx);
                }
            }
            'r' => {
                if let Some(item) = self.take_from_bag(idx, |k| k == ItemKind::RagePotion) {
                    self.players[idx].rage_turns_left = RAGE_TURNS + 1;
                    self.items[item].consumed_by = Some(idx);
                }
            }
            '.' => {}
            _ => {
                let target = self.players[idx].pos.step(key).expect("movement key");
                if let Some(m) = self.monster_at(level, target) {
                    let damage = if self.players[idx].rage_turns_left > 0 { RAGED_DAMAGE } else { PLAYER_DAMAGE };
                    let monster = &mut self.monsters[m];
                    monster.hp = (monster.hp - damage).max(0);
                    if monster.hp == 0 {
                        monster.alive = false;
                        self.players[idx].score += KILL_SCORE;
                    }
                } else if target == self.levels[level].shrine {
                    self.enter_shrine(idx, level);
                } else if self.levels[level].is_wall(target)
                    && !(self.mutants.contains(&Mutant::WallWalk) && !self.levels[level].is_border(target))
                {
                } else if self.player_at(level, target).is_none() {
                    self.players[idx].pos = target;
                    self.pick_up(idx);
                }
            }
        }
        let p = &mut self.players[idx];
        p.rage_turns_left = (p.rage_turns_left - 1).max(0);
    }

    fn take_from_bag(&mut self, idx: usize, kind: impl Fn(ItemKind) -> bool) -> Option<usize> {
        let slot = self.players[idx].bag.iter().position(|&i| kind(self.items[i].kind))?;
        let item = self.players[idx].bag.remove(slot);
        self.items[item].holder = None;
        Some(item)
    }

    fn enter_shrine(&mut self, idx: usize, level: usize) {
        if self.levels[level].cleansed {
            if level + 1 < self.levels.len() {
                let start = self.levels[level + 1].start;
                let arrival = self.free_square_near(level + 1, start);
                let p = &mut self.players[idx];
                p.level = level + 1;
                p.pos = arrival;
                self.pick_up(idx);
            }
            return;
        }
        if let Some(item) = self.take_from_bag(idx, |k| matches!(k, ItemKind::Scroll { .. })) {
            self.items[item].consumed_by = Some(idx);
            if self.items[item].kind == (ItemKind::Scroll { holy: true }) && self.items[item].level == level {
                self.levels[level].cleansed = true;
                self.players[idx].score += CLEANSE_SCORE;
                if level + 1 == self.levels.len() {
                    self.status = GameStatus::Won;
                }
            }
        }
    }

    /// Closest unoccupied floor square to `target` (breadth-first).
    fn free_square_near(&self, level: usize, target: Pos) -> Pos {
        let lv = &self.levels[level];
        let mut seen = BTreeSet::from([target]);
        let mut queue = VecDeque::from([target]);
        while let Some(p) = queue.pop_front() {
            if !lv.is_wall(p) && !self.occupied(level, p) {
                return p;
            }
            for n in p.neighbours4() {
                if lv.in_bounds(n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        target
    }

    fn pick_up(&mut self, idx: usize) {
        let (level, pos) = (self.players[idx].level, self.players[idx].pos);
        for i in 0..self.items.len() {
            let item = &self.items[i];
            if item.level == level && item.pos == pos && item.on_floor() && self.players[idx].bag.len() < self.players[idx].bag_capacity {
                self.items[i].holder = Some(idx);
                self.players[idx].bag.push(i);
            }
        }
    }

    fn monsters_turn(&mut self, level: usize) {
        let buggy = self.mutants.contains(&Mutant::BuggyMonsterMove);
        for m in 0..self.monsters.len() {
            let monster = &self.monsters[m];
            if !monster.alive || monster.level != level {
                continue;
            }
            let pos = monster.pos;
            let victim = self.players.iter().position(|p| p.level == level && p.hp > 0 && p.pos.is_adjacent4(pos));
            if let Some(v) = victim {
                let p = &mut self.players[v];
                p.hp = (p.hp - MONSTER_DAMAGE).max(0);
                continue;
            }
            let lv = &self.levels[level];
            let options: Vec<Pos> = pos
                .neighbours4()
                .into_iter()
                .filter(|&n| !lv.is_wall(n) && (buggy || !self.occupied(level, n)))
                .collect();
            if options.is_empty() {
                continue;
            }
            let target = options[self.rng.gen_range(0..options.len())];
            if self.debug && self.occupied(level, target) {
                let id = self.monsters[m].id.clone();
                self.record(format!("monster {id} moved onto occupied square {target} on level {level}"));
            }
            self.monsters[m].pos = target;
        }
    }

    fn check_invariants(&mut self) {
        let mut found = Vec::new();
        let mut seen: BTreeSet<(usize, Pos)> = BTreeSet::new();
        let occupants = self
            .players
            .iter()
            .map(|p| (p.id.as_str(), p.level, p.pos))
            .chain(self.monsters.iter().filter(|m| m.alive).map(|m| (m.id.as_str(), m.level, m.pos)));
        for (id, level, pos) in occupants {
            if !seen.insert((level, pos)) || self.levels[level].shrine == pos {
                found.push(format!("occupancy: {id} shares square {pos} on level {level}"));
            }
        }
        for p in &self.players {
            if !(0..=p.hp_max).contains(&p.hp) {
                found.push(format!("hp of {} out of bounds: {}", p.id, p.hp));
            }
            if p.bag.len() > p.bag_capacity {
                found.push(format!("bag of {} over capacity", p.id));
            }
        }
        for f in found {
            self.record(f);
        }
    }

    fn agent_properties(&self, p: &Player) -> crate::world::Properties {
        let bag: Vec<&str> = p.bag.iter().map(|&i| self.items[i].id.as_str()).collect();
        [
            ("hp", p.hp.into()),
            ("hpMax", p.hp_max.into()),
            ("bagContents", bag.join(",").into()),
            ("bagCapacity", p.bag_capacity.into()),
            ("score", p.score.into()),
            ("currentLevel", p.level.into()),
            ("rageTurnsLeft", p.rage_turns_left.into()),
            ("status", self.status.name().into()),
        ]
        .into_iter()
        .map(|(k, v): (&str, crate::world::Value)| (k.to_string(), v))
        .collect()
    }

    fn player_entity(&self, p: &Player) -> WorldEntity {
        let mut e = WorldEntity::new(p.id.clone(), "player", p.pos, self.turn);
        e.properties = self.agent_properties(p);
        e.with("level", p.level).with("alive", p.hp > 0)
    }
}

fn new_player(i: usize, pos: Pos, bag_capacity: usize) -> Player {
    Player {
        id: format!("P{}", i + 1),
        pos,
        level: 0,
        hp: PLAYER_HP,
        hp_max: PLAYER_HP,
        bag: Vec::new(),
        bag_capacity,
        score: 0,
        rage_turns_left: 0,
    }
}

/// Attempts at a layout whose start region covers at least half of the interior.
const LAYOUT_ATTEMPTS: usize = 100;

fn generate_layout(config: &DungeonConfig, rng: &mut ChaCha8Rng) -> Level {
    let interior = (config.grid_size - 2) * (config.grid_size - 2);
    let mut level = random_layout(config, rng);
    for _ in 1..LAYOUT_ATTEMPTS {
        if 2 * level.floor_cells().len() >= interior && level.shrine != Pos::new(2, 1) {
            break;
        }
        level = random_layout(config, rng);
    }
    level
}

fn random_layout(config: &DungeonConfig, rng: &mut ChaCha8Rng) -> Level {
    let n = config.grid_size;
    let start = Pos::new(1, 1);
    let mut walls = vec![vec![false; n]; n];
    for (y, row) in walls.iter_mut().enumerate() {
        for (x, cell) in row.iter_mut().enumerate() {
            let border = x == 0 || y == 0 || x == n - 1 || y == n - 1;
            *cell = border || rng.gen_bool(WALL_DENSITY);
        }
    }
    for p in [start, Pos::new(1, 2), Pos::new(2, 1)] {
        walls[p.y as usize][p.x as usize] = false;
    }
    let mut level = Level { walls, start, shrine: start, cleansed: false };
    let reachable = level.reachable(start, None);
    for y in 0..n {
        for x in 0..n {
            if !reachable.contains(&Pos::new(x as i32, y as i32)) {
                level.walls[y][x] = true;
            }
        }
    }
    let mut candidates: Vec<Pos> = level.floor_cells().into_iter().filter(|p| p.manhattan(start) > 2).collect();
    candidates.shuffle(rng);
    let floor = level.floor_cells().len();
    level.shrine = candidates
        .into_iter()
        .find(|&c| level.reachable(start, Some(c)).len() == floor - 1)
        .unwrap_or(Pos::new(2, 1));
    level
}

impl Environment for MiniDungeon {
    /// The observing player, its bag and everything on its level within
    /// Chebyshev distance `viewDistance` (no occlusion), including wall and
    /// floor tiles.
    fn observe(&mut self, agent_id: &str) -> Result<WorldModel, EnvError> {
        let idx = self.player_index(agent_id)?;
        let me = &self.players[idx];
        let (level, view) = (me.level, self.config.view_distance as i32);
        let lv = &self.levels[level];
        let t = self.turn;
        let mut obs = WorldModel::new(me.id.clone(), t, me.pos);
        obs.agent_properties = self.agent_properties(me);
        let visible = |p: Pos| p.chebyshev(me.pos) <= view;
        for y in (me.pos.y - view).max(0)..=(me.pos.y + view).min(lv.height() - 1) {
            for x in (me.pos.x - view).max(0)..=(me.pos.x + view).min(lv.width() - 1) {
                let p = Pos::new(x, y);
                let wall = lv.is_wall(p);
                obs.insert(
                    WorldEntity::new(format!("T{level}_{x}_{y}"), if wall { "wall" } else { "floor" }, p, t)
                        .with("walkable", !wall)
                        .with("level", level),
                );
            }
        }
        for p in &self.players {
            if p.id == me.id || (p.level == level && visible(p.pos)) {
                obs.insert(self.player_entity(p));
            }
        }
        for m in self.monsters.iter().filter(|m| m.level == level && visible(m.pos)) {
            let mut e = WorldEntity::new(m.id.clone(), "monster", m.pos, t).with("hp", m.hp).with("level", level);
            e.alive = m.alive;
            obs.insert(e);
        }
        for item in &self.items {
            let e = WorldEntity::new(item.id.clone(), item.kind.type_name(), item.pos, t).with("level", item.level);
            if item.holder == Some(idx) {
                obs.insert(e.with("holder", me.id.clone()).with("level", level).moved(me.pos));
            } else if item.consumed_by == Some(idx) {
                obs.insert(e.dead());
            } else if item.on_floor() && item.level == level && visible(item.pos) {
                obs.insert(e.with("interactable", true).with("interaction", "step"));
            }
        }
        if visible(lv.shrine) {
            obs.insert(
                WorldEntity::new(format!("shrine_{level}"), "shrine", lv.shrine, t)
                    .with("level", level)
                    .with("cleansed", lv.cleansed)
                    .with("blocking", !lv.cleansed)
                    .with("interactable", true)
                    .with("interaction", "bump"),
            );
        }
        Ok(obs)
    }

    /// Keys: `w`/`a`/`s`/`d` move (bumping a monster attacks it, bumping the
    /// shrine uses a scroll on it), `e` drinks a heal potion, `r` a rage
    /// potion, `q` quits and `.` passes. After the player's command every
    /// monster on the player's level attacks an adjacent player or moves to
    /// a random free neighbouring square.
    fn command(&mut self, agent_id: &str, key: char) -> Result<WorldModel, EnvError> {
        let idx = self.player_index(agent_id)?;
        if !KEYS.contains(&key) {
            return Err(EnvError::InvalidKey(key));
        }
        if self.status != GameStatus::Running {
            return Err(EnvError::GameOver);
        }
        if idx != self.next_player {
            return Err(EnvError::OutOfTurn(agent_id.to_string()));
        }
        self.player_command(idx, key);
        if self.status == GameStatus::Running {
            let level = self.players[idx].level;
            self.monsters_turn(level);
            if self.players.iter().any(|p| p.hp == 0) {
                self.status = GameStatus::Lost;
            }
        }
        self.turn += 1;
        self.next_player = (self.next_player + 1) % self.players.len();
        if self.debug {
            self.check_invariants();
        }
        self.observe(agent_id)
    }

    fn implanted_violations(&self) -> Vec<String> {
        self.violations.clone()
    }
}

trait Moved {
    fn moved(self, to: Pos) -> Self;
}

impl Moved for WorldEntity {
    fn moved(mut self, to: Pos) -> Self {
        self.position = to;
        self
    }
}
