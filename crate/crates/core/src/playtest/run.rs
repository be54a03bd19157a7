//! Driving whole MiniDungeon sessions: the shrine playtest and the seeded soak.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::goals::shrine_playtest;
use super::oracles::{check_agent, Violation, IMPLANTED};
use crate::agent::{AgentError, AgentStatus, TestAgent, DEFAULT_BUDGET};
use crate::env::{EnvError, Environment};
use crate::games::{DungeonConfig, DungeonError, GameStatus, MiniDungeon, Mutant};

#[derive(Clone, Debug, PartialEq)]
pub struct PlaytestConfig {
    pub dungeon: DungeonConfig,
    pub max_cycles: u64,
    pub goal_budget: u32,
    pub mutants: Vec<Mutant>,
}

impl PlaytestConfig {
    pub fn new(dungeon: DungeonConfig) -> Self {
        PlaytestConfig { dungeon, max_cycles: 4000, goal_budget: DEFAULT_BUDGET, mutants: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlaytestReport {
    pub seed: u64,
    pub status: String,
    pub won: bool,
    pub agent_status: AgentStatus,
    pub cycles: u64,
    pub turns: u64,
    pub score: i64,
    /// Trace-oracle violations followed by implanted-assertion hits.
    pub violations: Vec<Violation>,
}

impl PlaytestReport {
    pub fn passed(&self) -> bool {
        self.won && self.violations.is_empty()
    }
}

/// Runs the shrine playtest with player `P1`; a second player, if any, only passes.
pub fn run_playtest(config: &PlaytestConfig) -> Result<(PlaytestReport, TestAgent), DungeonError> {
    let mut game = MiniDungeon::new(config.dungeon.clone())?.with_debug(true);
    for &m in &config.mutants {
        game = game.with_mutant(m);
    }
    let goal = shrine_playtest(config.dungeon.level_count, config.goal_budget);
    let mut agent = TestAgent::new("P1", config.dungeon.seed).with_goal(goal);
    let mut implanted_seen = 0;
    let mut implanted = Vec::new();
    while agent.cycles() < config.max_cycles && game.status() == GameStatus::Running {
        match agent.deliberate(&mut game) {
            Ok(AgentStatus::Running) => {}
            Ok(_) => break,
            Err(AgentError::Env(EnvError::GameOver)) => break,
            Err(e) => panic!("unexpected agent error in playtest: {e}"),
        }
        for pid in game.players().iter().skip(1).map(|p| p.id.clone()).collect::<Vec<_>>() {
            if game.status() == GameStatus::Running {
                let _ = game.command(&pid, '.');
            }
        }
        let all = game.implanted_violations();
        for msg in &all[implanted_seen..] {
            implanted.push(Violation {
                oracle: IMPLANTED.into(),
                step_index: agent.trace().len().saturating_sub(1),
                detail: msg.clone(),
            });
        }
        implanted_seen = all.len();
    }
    let mut violations = check_agent(&agent);
    violations.extend(implanted);
    let report = PlaytestReport {
        seed: config.dungeon.seed,
        status: game.status().name().into(),
        won: game.status() == GameStatus::Won,
        agent_status: agent.status(),
        cycles: agent.cycles(),
        turns: game.turn(),
        score: game.player("P1").map_or(0, |p| p.score),
        violations,
    };
    Ok((report, agent))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SoakConfig {
    pub dungeon: DungeonConfig,
    pub turns: u64,
    pub mutants: Vec<Mutant>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SoakViolation {
    /// Turn counted over the whole soak.
    pub turn: u64,
    pub game: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SoakReport {
    pub seed: u64,
    pub turns: u64,
    pub games: u64,
    pub first_violation_turn: Option<u64>,
    pub violations: Vec<SoakViolation>,
}

const SOAK_KEYS: [char; 6] = ['w', 'a', 's', 'd', 'e', 'r'];

/// Plays `turns` random commands with the implanted assertions on, cycling
/// through the players; a finished game is replaced by a fresh one with a
/// derived seed.
pub fn oracle_soak(config: &SoakConfig) -> Result<SoakReport, DungeonError> {
    let seed = config.dungeon.seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fresh = |game_no: u64| -> Result<MiniDungeon, DungeonError> {
        let dungeon = DungeonConfig { seed: seed.wrapping_add(game_no.wrapping_mul(0x9E37_79B9)), ..config.dungeon.clone() };
        let mut g = MiniDungeon::new(dungeon)?.with_debug(true);
        for &m in &config.mutants {
            g = g.with_mutant(m);
        }
        Ok(g)
    };
    let mut games = 0;
    let mut game = fresh(games)?;
    let mut violations = Vec::new();
    let mut seen = 0;
    for turn in 0..config.turns {
        if game.status() != GameStatus::Running {
            games += 1;
            game = fresh(games)?;
            seen = 0;
        }
        let player = game.players()[(game.turn() as usize) % game.players().len()].id.clone();
        let key = *SOAK_KEYS.choose(&mut rng).expect("keys are not empty");
        game.command(&player, key).expect("soak commands are valid");
        let all = game.implanted_violations();
        for message in &all[seen..] {
            violations.push(SoakViolation { turn, game: games, message: message.clone() });
        }
        seen = all.len();
    }
    Ok(SoakReport {
        seed,
        turns: config.turns,
        games: games + 1,
        first_violation_turn: violations.first().map(|v| v.turn),
        violations,
    })
}
