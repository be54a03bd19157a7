//! MiniDungeon playtesting goals: staying alive while pursuing a target,
//! reaching objects, and the online solver that tries resources on an
//! object until its state satisfies a predicate.

use std::sync::Arc;

use crate::agent::tactics::{bump, explore, navigate_next_to, step_onto};
use crate::agent::{Belief, Command, GoalStructure, Tactic};
use crate::world::WorldEntity;

/// Health at or below which the agent stops picking fights.
pub const CRITICAL_HP: i64 = 3;

/// Monsters currently seen next to the agent, in id order.
fn adjacent_monsters(b: &Belief) -> Vec<&WorldEntity> {
    let now = b.world.timestamp;
    b.world
        .on_current_level(true)
        .filter(|e| e.entity_type == "monster" && e.timestamp == now && e.position.is_adjacent4(b.position()))
        .collect()
}

fn holds_type(b: &Belief, entity_type: &str) -> bool {
    b.held().iter().any(|e| e.entity_type == entity_type)
}

fn hp(b: &Belief) -> (i64, i64) {
    (b.int("hp").unwrap_or(0), b.int("hpMax").unwrap_or(0))
}

/// Drinks a heal potion when below half health.
pub fn use_healing_potion() -> Tactic {
    Tactic::action("useHealingPot", |b| {
        let (hp, max) = hp(b);
        (holds_type(b, "healPotion") && 2 * hp < max).then(|| Command::key('e'))
    })
}

/// Drinks a rage potion when a monster is adjacent and no rage is active.
pub fn use_rage_potion() -> Tactic {
    Tactic::action("useRagePot", |b| {
        let raging = b.int("rageTurnsLeft").unwrap_or(0) > 0;
        (holds_type(b, "ragePotion") && !raging && !adjacent_monsters(b).is_empty()).then(|| Command::key('r'))
    })
}

/// Attacks the first adjacent monster while health is above critical.
pub fn attack_monster() -> Tactic {
    Tactic::action("attackMonster", |b| {
        if hp(b).0 <= CRITICAL_HP {
            return None;
        }
        let m = adjacent_monsters(b).into_iter().next()?;
        b.position().key_towards(m.position).map(|k| Command::key(k).interacting_with(m.id.clone()))
    })
}

/// Survival actions first, then `main`, then exploration, then ABORT.
pub fn survive_then(main: Vec<Tactic>) -> Tactic {
    let mut all = vec![use_healing_potion(), use_rage_potion(), attack_monster()];
    all.extend(main);
    all.push(explore());
    all.push(Tactic::Abort);
    Tactic::first_of(all)
}

/// Survival tactic heading for a square next to `o`.
pub fn survival_tactic(o: impl Into<String>) -> Tactic {
    survive_then(vec![navigate_next_to(o)])
}

/// Agent stands 4-adjacent to the believed position of `o`.
pub fn entity_in_close_range(o: impl Into<String>, budget: u32) -> GoalStructure {
    let o = o.into();
    let id = o.clone();
    GoalStructure::goal(
        format!("entityInCloseRange({o})"),
        move |b| b.entity_here(&id).is_some_and(|e| e.position.is_adjacent4(b.position())),
        survival_tactic(o),
        budget,
    )
}

/// Untried floor entities of `entity_type` on the agent's level, first discovered first.
pub fn untried_on_floor<'a>(b: &'a Belief, entity_type: &str) -> Vec<&'a WorldEntity> {
    let mut found: Vec<&WorldEntity> = b
        .world
        .on_current_level(true)
        .filter(|e| e.entity_type == entity_type && e.prop("holder").is_none() && !b.memory.is_tried(&e.id))
        .collect();
    found.sort_by_key(|e| (b.memory.discovery_rank(&e.id).unwrap_or(u64::MAX), e.id.clone()));
    found
}

fn holds_untried(b: &Belief, entity_type: &str) -> bool {
    b.held().iter().any(|e| e.entity_type == entity_type && !b.memory.is_tried(&e.id))
}

/// Drinks a potion to make room when the bag is full and an untried
/// `entity_type` is known on the floor.
fn free_bag(entity_type: String) -> Tactic {
    Tactic::action("freeBag", move |b| {
        let capacity = b.int("bagCapacity").unwrap_or(0) as usize;
        if b.held().len() < capacity || untried_on_floor(b, &entity_type).is_empty() {
            return None;
        }
        if holds_type(b, "healPotion") {
            Some(Command::key('e'))
        } else if holds_type(b, "ragePotion") {
            Some(Command::key('r'))
        } else {
            None
        }
    })
}

/// Walks onto the first reachable untried floor entity of `entity_type`.
fn fetch(entity_type: String) -> Tactic {
    Tactic::action(format!("fetch({entity_type})"), move |b| {
        untried_on_floor(b, &entity_type)
            .into_iter()
            .find_map(|e| step_onto(b, e.position))
            .map(Command::key)
    })
}

/// The agent carries an untried entity of `entity_type`.
pub fn obtain(entity_type: impl Into<String>, budget: u32) -> GoalStructure {
    let t = entity_type.into();
    let check = t.clone();
    GoalStructure::goal(
        format!("obtain({t})"),
        move |b| holds_untried(b, &check),
        survive_then(vec![free_bag(t.clone()), fetch(t)]),
        budget,
    )
}

/// Bumps into the adjacent `o`, trying the first carried `entity_type`.
fn use_on(o: String, entity_type: String) -> Tactic {
    Tactic::action(format!("useOn({o})"), move |b| {
        let target = b.entity_here(&o)?;
        let key = b.position().key_towards(target.position)?;
        let item = b.held().into_iter().find(|e| e.entity_type == entity_type)?;
        Some(Command::key(key).trying(item.id.clone()).interacting_with(o.clone()))
    })
}

pub type StatePredicate = Arc<dyn Fn(&WorldEntity) -> bool + Send + Sync>;

/// Solver specification: change `target` until `phi` holds on it by trying
/// entities of `resource_type` on it one at a time.
#[derive(Clone)]
pub struct SolverSpec {
    pub resource_type: String,
    pub target: String,
    pub phi: StatePredicate,
    /// Budget of every primitive goal.
    pub budget: u32,
    /// Rounds after the first one.
    pub retries: u32,
}

impl SolverSpec {
    pub fn new(
        resource_type: impl Into<String>,
        target: impl Into<String>,
        phi: impl Fn(&WorldEntity) -> bool + Send + Sync + 'static,
    ) -> Self {
        SolverSpec {
            resource_type: resource_type.into(),
            target: target.into(),
            phi: Arc::new(phi),
            budget: crate::agent::DEFAULT_BUDGET,
            retries: 10,
        }
    }

    /// Cleanse `shrine_{level}` with scrolls.
    pub fn cleanse_shrine(level: usize) -> Self {
        SolverSpec::new("scroll", format!("shrine_{level}"), |e| e.flag("cleansed"))
    }
}

fn phi_holds(b: &Belief, target: &str, phi: &StatePredicate) -> bool {
    b.entity_here(target).is_some_and(|e| phi(e))
}

/// REPEAT(FIRSTof(φ(o), SEQ(obtain T, entityInCloseRange o, use T on o, φ(o)))).
/// A resource is marked tried when it is used, so none is used twice.
pub fn solver(spec: &SolverSpec) -> GoalStructure {
    let (o, t) = (spec.target.clone(), spec.resource_type.clone());
    let check = |name: String, o: String, phi: StatePredicate| {
        GoalStructure::check(name, move |b| phi_holds(b, &o, &phi))
    };
    let used = {
        let (po, pt, phi) = (o.clone(), t.clone(), spec.phi.clone());
        GoalStructure::goal(
            format!("used({t} on {o})"),
            move |b| phi_holds(b, &po, &phi) || !holds_untried(b, &pt),
            survive_then(vec![use_on(o.clone(), t.clone()), navigate_next_to(o.clone())]),
            spec.budget,
        )
    };
    let round = GoalStructure::seq(vec![
        obtain(t, spec.budget),
        entity_in_close_range(o.clone(), spec.budget),
        used,
        check(format!("phi({o})"), o.clone(), spec.phi.clone()),
    ]);
    GoalStructure::repeat(
        GoalStructure::first_of(vec![check(format!("phi({o}) already"), o, spec.phi.clone()), round]),
        spec.retries,
    )
}

/// The agent has passed through the portal of `shrine_{level}`.
pub fn interacted_shrine(level: usize, budget: u32) -> GoalStructure {
    let o = format!("shrine_{level}");
    GoalStructure::goal(
        format!("interacted({o})"),
        move |b| b.int("currentLevel").unwrap_or(0) > level as i64,
        survive_then(vec![bump(o.clone()), navigate_next_to(o)]),
        budget,
    )
}

/// SEQ(solver(shrine_0), interacted(shrine_0), solver(shrine_1), ...) over `levels` levels.
pub fn shrine_playtest(levels: usize, budget: u32) -> GoalStructure {
    let mut steps = Vec::new();
    for level in 0..levels {
        if level > 0 {
            steps.push(interacted_shrine(level - 1, budget));
        }
        let mut spec = SolverSpec::cleanse_shrine(level);
        spec.budget = budget;
        steps.push(solver(&spec));
    }
    GoalStructure::seq(steps)
}
