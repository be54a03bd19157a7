//! Scriptless exploratory testing.
//!
//! Each step observes the game, derives the currently possible actions
//! (movement keys, useful item keys, and one reach-and-interact action per
//! reachable interactable entity), picks one with the action-selection
//! mechanism and runs it, then checks the oracles: a game error is a crash,
//! 50 actions without a state change is a hang, plus implanted game
//! assertions and caller-supplied invariants.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::tactics::step_onto;
use crate::agent::{AgentError, Belief, Command, GoalStructure, Tactic, TestAgent};
use crate::env::{EnvError, Environment};
use crate::world::{WorldEntity, WorldModel};

/// Consecutive actions without a state change that count as a hang.
pub const STUCK_WINDOW: usize = 50;

const MOVES: [char; 4] = ['w', 'a', 's', 'd'];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ActionKind {
    BasicCommand,
    CompoundTactic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DerivedAction {
    pub kind: ActionKind,
    /// Set exactly for compound tactics.
    pub target: Option<String>,
    /// Key of a basic command.
    pub key: Option<char>,
}

impl DerivedAction {
    fn basic(key: char) -> Self {
        DerivedAction { kind: ActionKind::BasicCommand, target: None, key: Some(key) }
    }

    fn compound(target: &str) -> Self {
        DerivedAction { kind: ActionKind::CompoundTactic, target: Some(target.to_string()), key: None }
    }
}

/// A basic key worth sending only while carrying an entity of `when_holding`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UseKey {
    pub key: char,
    pub when_holding: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplorerConfig {
    /// Actions to take; a compound tactic counts as one.
    pub budget: usize,
    pub seed: u64,
    /// Key sent while standing on an entity whose interaction is `press`.
    pub press_key: char,
    pub use_keys: Vec<UseKey>,
    /// Deliberation cycles a compound tactic may use.
    pub compound_cycles: u64,
    /// Replace the game with a fresh one after a crash and carry on.
    pub restart_on_crash: bool,
}

impl ExplorerConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        ExplorerConfig { budget, seed, press_key: 'e', use_keys: Vec::new(), compound_cycles: 100, restart_on_crash: true }
    }

    /// Heal and rage potion keys for MiniDungeon.
    pub fn with_dungeon_keys(mut self) -> Self {
        self.use_keys = vec![
            UseKey { key: 'e', when_holding: "healPotion".into() },
            UseKey { key: 'r', when_holding: "ragePotion".into() },
        ];
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExplorerError {
    #[error("the exploration budget must be at least one action")]
    EmptyBudget,
    #[error("no action can be derived")]
    NoActions,
    #[error(transparent)]
    Agent(#[from] AgentError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleHit {
    pub oracle: String,
    /// Index of the action after which the oracle fired.
    pub action_index: usize,
    pub detail: String,
}

pub const CRASH: &str = "crash";
pub const STUCK: &str = "stuck";
pub const IMPLANTED: &str = "implanted";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExplorationReport {
    pub seed: u64,
    pub actions: usize,
    pub compound_actions: usize,
    pub unique_interactions: usize,
    /// Ids interacted with or tried, including ones that crashed the game; sorted.
    pub interacted: Vec<String>,
    /// Entities the agent has seen flagged interactable at least once.
    pub interactables_seen: usize,
    pub visited_states: usize,
    pub restarts: usize,
    pub violations: Vec<OracleHit>,
}

/// Game invariant checked after every action: returns a message when broken.
pub type CustomOracle<E> = Box<dyn Fn(&E, &Belief) -> Option<String>>;

/// Hash of the sorted entities (id, type, position, liveness, properties)
/// and the agent's position and properties; timestamps and turn counters
/// are left out.
pub fn state_digest(world: &WorldModel) -> u64 {
    let mut h = DefaultHasher::new();
    world.agent_position.hash(&mut h);
    for (k, v) in &world.agent_properties {
        if k != "turn" {
            (k, v).hash(&mut h);
        }
    }
    for e in world.entities.values() {
        (&e.id, &e.entity_type, e.position, e.alive, &e.properties).hash(&mut h);
    }
    h.finish()
}

fn interaction(e: &WorldEntity) -> Option<&str> {
    if e.alive && e.flag("interactable") {
        e.string("interaction").or(Some("press"))
    } else {
        None
    }
}

fn reachable(b: &Belief, e: &WorldEntity) -> bool {
    match interaction(e) {
        Some("bump") => e.position.is_adjacent4(b.position()) || b.path_next_to(e.position).is_some(),
        Some(_) => e.position == b.position() || b.path_to(e.position).is_some(),
        None => false,
    }
}

/// Movement keys, the press key while on a pressable entity, item keys
/// while carrying their item, and one compound action per interactable
/// entity on the current level with a known path.
pub fn derive_actions(b: &Belief, config: &ExplorerConfig) -> Vec<DerivedAction> {
    let mut actions: Vec<DerivedAction> = MOVES.iter().map(|&k| DerivedAction::basic(k)).collect();
    let here = b.world.on_current_level(true).any(|e| e.position == b.position() && interaction(e) == Some("press"));
    if here {
        actions.push(DerivedAction::basic(config.press_key));
    }
    let held = b.held();
    for u in &config.use_keys {
        if held.iter().any(|e| e.entity_type == u.when_holding) && !actions.iter().any(|a| a.key == Some(u.key)) {
            actions.push(DerivedAction::basic(u.key));
        }
    }
    for e in b.world.on_current_level(true) {
        if e.prop("holder").is_none() && reachable(b, e) {
            actions.push(DerivedAction::compound(&e.id));
        }
    }
    actions
}

/// Uniform over compound actions whose target is untried; otherwise uniform over all.
pub fn select_action<'a>(actions: &'a [DerivedAction], b: &Belief, rng: &mut ChaCha8Rng) -> Option<&'a DerivedAction> {
    let fresh: Vec<&DerivedAction> = actions
        .iter()
        .filter(|a| a.target.as_deref().is_some_and(|t| !b.memory.is_tried(t)))
        .collect();
    if fresh.is_empty() {
        actions.choose(rng)
    } else {
        fresh.choose(rng).copied()
    }
}

/// Goal of a compound action: interact with `target` once more.
fn reach_and_interact(b: &Belief, target: &str, press_key: char) -> GoalStructure {
    let done_at = b.memory.interactions(target) + 1;
    let id = target.to_string();
    let check = id.clone();
    let act = Tactic::action(format!("interact({id})"), move |b| {
        let e = b.entity_here(&id)?;
        let cmd = |key: char| Some(Command::key(key).trying(id.clone()).interacting_with(id.clone()));
        match interaction(e)? {
            "bump" => match b.position().key_towards(e.position) {
                Some(k) => cmd(k),
                None => {
                    let path = b.path_next_to(e.position)?;
                    b.first_step_key(&path).map(Command::key)
                }
            },
            "step" => {
                let key = step_onto(b, e.position)?;
                if b.position().step(key) == Some(e.position) {
                    cmd(key)
                } else {
                    Some(Command::key(key))
                }
            }
            _ if e.position == b.position() => cmd(press_key),
            _ => step_onto(b, e.position).map(Command::key),
        }
    });
    GoalStructure::goal(
        format!("interacted({target})"),
        move |b| b.memory.interactions(&check) >= done_at,
        Tactic::first_of(vec![act, Tactic::Abort]),
        u32::MAX,
    )
}

/// Runs an exploratory session on games made by `factory`.
pub fn run_exploratory<E: Environment>(
    mut factory: impl FnMut() -> E,
    config: &ExplorerConfig,
    custom: &[CustomOracle<E>],
) -> Result<ExplorationReport, ExplorerError> {
    if config.budget == 0 {
        return Err(ExplorerError::EmptyBudget);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut env = factory();
    let mut agent = TestAgent::new(agent_id_of(&mut env)?, config.seed);
    let mut violations = Vec::new();
    let mut visited = BTreeSet::new();
    let mut interactables = BTreeSet::new();
    let (mut compound, mut restarts, mut implanted_seen) = (0, 0, 0);
    let (mut last_digest, mut unchanged) = (None, 0);
    let mut actions = 0;
    while actions < config.budget {
        let index = actions;
        actions += 1;
        let observed = agent.observe(&mut env);
        let outcome = match observed {
            Err(e) => Err(e),
            Ok(()) => {
                let derived = derive_actions(agent.belief(), config);
                let action = select_action(&derived, agent.belief(), &mut rng).ok_or(ExplorerError::NoActions)?.clone();
                match (&action.target, action.key) {
                    (Some(target), _) => {
                        compound += 1;
                        let goal = reach_and_interact(agent.belief(), target, config.press_key);
                        agent.set_goal(goal);
                        let r = agent.run(&mut env, config.compound_cycles).map(|_| ());
                        if matches!(r, Err(AgentError::Env(EnvError::Crash(_) | EnvError::Transport(_)))) {
                            agent.belief_mut().memory.mark_tried(target);
                        }
                        r
                    }
                    (None, Some(key)) => agent.execute(&mut env, &Command::key(key)),
                    (None, None) => unreachable!("derived actions carry a target or a key"),
                }
            }
        };
        match outcome {
            Ok(()) => {}
            Err(AgentError::Env(e @ (EnvError::Crash(_) | EnvError::Transport(_)))) => {
                violations.push(OracleHit { oracle: CRASH.into(), action_index: index, detail: e.to_string() });
                if !config.restart_on_crash {
                    break;
                }
                env = factory();
                agent.reset_world();
                restarts += 1;
                implanted_seen = 0;
                last_digest = None;
                unchanged = 0;
                continue;
            }
            Err(AgentError::Env(EnvError::GameOver)) => {
                env = factory();
                agent.reset_world();
                restarts += 1;
                implanted_seen = 0;
                last_digest = None;
                unchanged = 0;
                continue;
            }
            Err(e) => return Err(e.into()),
        }
        let world = &agent.belief().world;
        interactables.extend(world.entities.values().filter(|e| e.flag("interactable")).map(|e| e.id.clone()));
        let digest = state_digest(world);
        visited.insert(digest);
        if last_digest == Some(digest) {
            unchanged += 1;
            if unchanged == STUCK_WINDOW {
                violations.push(OracleHit {
                    oracle: STUCK.into(),
                    action_index: index,
                    detail: format!("no state change for {STUCK_WINDOW} actions"),
                });
                unchanged = 0;
            }
        } else {
            unchanged = 0;
        }
        last_digest = Some(digest);
        let implanted = env.implanted_violations();
        for msg in &implanted[implanted_seen.min(implanted.len())..] {
            violations.push(OracleHit { oracle: IMPLANTED.into(), action_index: index, detail: msg.clone() });
        }
        implanted_seen = implanted.len();
        for (i, oracle) in custom.iter().enumerate() {
            if let Some(detail) = oracle(&env, agent.belief()) {
                violations.push(OracleHit { oracle: format!("custom{i}"), action_index: index, detail });
            }
        }
    }
    let b = agent.belief();
    let interacted: Vec<String> =
        b.memory.interacted().chain(b.memory.tried().iter().map(String::as_str)).collect::<BTreeSet<_>>().into_iter().map(String::from).collect();
    Ok(ExplorationReport {
        seed: config.seed,
        actions,
        compound_actions: compound,
        unique_interactions: interacted.len(),
        interacted,
        interactables_seen: interactables.len(),
        visited_states: visited.len(),
        restarts,
        violations,
    })
}

fn agent_id_of<E: Environment>(env: &mut E) -> Result<String, ExplorerError> {
    for id in [crate::games::maze::AGENT_ID, "P1"] {
        if env.observe(id).is_ok() {
            return Ok(id.to_string());
        }
    }
    Err(ExplorerError::Agent(AgentError::Env(EnvError::UnknownAgent("no known agent id".into()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{ButtonMaze, Mutant};

    const ROOM: &str = "\
w,w,w,w,w,w,w
w,b0,f,b1,f,b2,w
w,f,f,f,f,f,w
w,w,w,w,w,w,w
";

    const BEHIND_DOOR: &str = "\
w,w,w,w,w,w
w,b0,f,d0,b1,w
w,w,w,w,w,w

b0,d0
";

    fn belief_after_observe(csv: &str) -> Belief {
        let mut maze = ButtonMaze::load_csv(csv).unwrap();
        let mut agent = TestAgent::new("agent", 0);
        agent.observe(&mut maze).unwrap();
        agent.belief().clone()
    }

    #[test]
    fn one_compound_action_per_reachable_button() {
        let b = belief_after_observe(ROOM);
        let actions = derive_actions(&b, &ExplorerConfig::new(10, 0));
        let targets: Vec<&str> = actions.iter().filter_map(|a| a.target.as_deref()).collect();
        assert_eq!(targets, vec!["b0", "b1", "b2"]);
        // Standing on b0: the press key is a basic action too.
        assert!(actions.iter().any(|a| a.key == Some('e')));
    }

    #[test]
    fn closed_door_hides_the_button_behind_it() {
        let b = belief_after_observe(BEHIND_DOOR);
        let targets: Vec<String> =
            derive_actions(&b, &ExplorerConfig::new(10, 0)).into_iter().filter_map(|a| a.target).collect();
        assert_eq!(targets, vec!["b0".to_string()]);
    }

    #[test]
    fn untried_targets_win_selection() {
        let mut b = belief_after_observe(ROOM);
        b.memory.mark_tried("b0");
        b.memory.mark_tried("b2");
        let actions = derive_actions(&b, &ExplorerConfig::new(10, 0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert_eq!(select_action(&actions, &b, &mut rng).unwrap().target.as_deref(), Some("b1"));
        }
    }

    #[test]
    fn all_tried_selection_is_uniform() {
        let mut b = belief_after_observe(ROOM);
        for id in ["b0", "b1", "b2"] {
            b.memory.mark_tried(id);
        }
        let actions = derive_actions(&b, &ExplorerConfig::new(10, 0));
        let n = actions.len();
        let mut counts = vec![0usize; n];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws = 20_000;
        for _ in 0..draws {
            let a = select_action(&actions, &b, &mut rng).unwrap();
            counts[actions.iter().position(|x| x == a).unwrap()] += 1;
        }
        let expected = draws as f64 / n as f64;
        for c in counts {
            assert!((c as f64 - expected).abs() < 0.1 * expected, "{c} vs {expected}");
        }
    }

    #[test]
    fn budget_one_takes_one_action() {
        let r = run_exploratory(|| ButtonMaze::load_csv(ROOM).unwrap(), &ExplorerConfig::new(1, 0), &[]).unwrap();
        assert_eq!(r.actions, 1);
        assert!(run_exploratory(|| ButtonMaze::load_csv(ROOM).unwrap(), &ExplorerConfig::new(0, 0), &[]).is_err());
    }

    #[test]
    fn crash_button_is_found() {
        let make = || ButtonMaze::load_csv(ROOM).unwrap().with_mutant(Mutant::CrashButton);
        let r = run_exploratory(make, &ExplorerConfig::new(30, 3), &[]).unwrap();
        assert!(r.violations.iter().any(|v| v.oracle == CRASH), "{r:?}");
        assert!(r.restarts >= 1);
    }

    /// A game that ignores every command.
    struct Frozen;

    impl Environment for Frozen {
        fn observe(&mut self, agent_id: &str) -> Result<WorldModel, EnvError> {
            Ok(WorldModel::new(agent_id, 0, crate::world::Pos::new(1, 1)))
        }

        fn command(&mut self, agent_id: &str, _key: char) -> Result<WorldModel, EnvError> {
            self.observe(agent_id)
        }
    }

    #[test]
    fn frozen_game_is_stuck_once_per_window() {
        let r = run_exploratory(|| Frozen, &ExplorerConfig::new(2 * STUCK_WINDOW + 10, 0), &[]).unwrap();
        let stuck: Vec<usize> = r.violations.iter().filter(|v| v.oracle == STUCK).map(|v| v.action_index).collect();
        assert_eq!(stuck, vec![STUCK_WINDOW, 2 * STUCK_WINDOW]);
    }

    #[test]
    fn custom_oracle_is_reported() {
        let oracle: CustomOracle<ButtonMaze> = Box::new(|m, _| (m.press_count(1) > 0).then(|| "b1 pressed".to_string()));
        let r = run_exploratory(|| ButtonMaze::load_csv(ROOM).unwrap(), &ExplorerConfig::new(40, 5), &[oracle]).unwrap();
        assert!(r.violations.iter().any(|v| v.oracle == "custom0"));
    }

    #[test]
    fn exploration_is_deterministic() {
        let run = || run_exploratory(|| ButtonMaze::load_csv(ROOM).unwrap(), &ExplorerConfig::new(60, 9), &[]).unwrap();
        assert_eq!(run(), run());
    }

    #[test]
    fn open_maze_is_mostly_covered() {
        use crate::games::levelgen::{generate_level, LevelParams};
        for seed in 0..3 {
            let csv = generate_level(&LevelParams::open(12, seed)).unwrap().csv;
            let r = run_exploratory(|| ButtonMaze::load_csv(&csv).unwrap(), &ExplorerConfig::new(300, seed), &[]).unwrap();
            assert_eq!(r.interactables_seen, 12, "seed {seed}");
            assert!(r.unique_interactions >= 11, "seed {seed}: {r:?}");
        }
    }
}
