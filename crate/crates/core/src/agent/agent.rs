use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::belief::Belief;
use super::goal::{FailReason, GoalStatus, GoalStructure};
use super::tactic::{Command, Selection};
use crate::env::{EnvError, Environment};
use crate::world::{MergeError, Pos, Properties};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AgentStatus {
    Running,
    Succeeded,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AgentError {
    #[error("agent has no goal")]
    NoGoal,
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Merge(#[from] MergeError),
}

/// Agent state recorded with each trace entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StepSnapshot {
    pub position: Pos,
    pub level: i64,
    pub properties: Properties,
    /// Types of the believed entities sharing the agent's square
    /// (excluding the agent itself and what it carries).
    pub terrain: Vec<String>,
    /// Types of the live entities seen this turn on a 4-adjacent square.
    pub adjacent: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceEntry {
    pub cycle: u64,
    pub turn: u64,
    pub command: Option<char>,
    pub digest: u64,
    pub goal: Option<String>,
    pub snapshot: StepSnapshot,
}

enum Decision {
    Send(Command),
    /// No action enabled; the cycle passes without a command.
    Idle,
    Abort,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunSummary {
    pub status: AgentStatus,
    pub cycles: u64,
}

/// A BDI test agent: belief, one goal structure, a seeded random stream and a trace.
#[derive(Clone, Debug)]
pub struct TestAgent {
    id: String,
    belief: Belief,
    goal: Option<GoalStructure>,
    rng: ChaCha8Rng,
    trace: Vec<TraceEntry>,
    cycle: u64,
}

impl TestAgent {
    pub fn new(id: impl Into<String>, seed: u64) -> Self {
        let id = id.into();
        TestAgent {
            belief: Belief::new(id.clone()),
            id,
            goal: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
            trace: Vec::new(),
            cycle: 0,
        }
    }

    pub fn with_goal(mut self, goal: GoalStructure) -> Self {
        self.goal = Some(goal);
        self
    }

    pub fn set_goal(&mut self, goal: GoalStructure) {
        self.goal = Some(goal);
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn belief(&self) -> &Belief {
        &self.belief
    }

    pub fn belief_mut(&mut self) -> &mut Belief {
        &mut self.belief
    }

    /// Forgets the world (e.g. after the game was restarted); memory is kept.
    pub fn reset_world(&mut self) {
        let memory = std::mem::take(&mut self.belief.memory);
        self.belief = Belief::new(self.id.clone());
        self.belief.memory = memory;
    }

    pub fn goal(&self) -> Option<&GoalStructure> {
        self.goal.as_ref()
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    pub fn cycles(&self) -> u64 {
        self.cycle
    }

    pub fn status(&self) -> AgentStatus {
        match self.goal.as_ref().map(GoalStructure::status) {
            Some(GoalStatus::Success) => AgentStatus::Succeeded,
            Some(GoalStatus::Fail) => AgentStatus::Failed,
            _ => AgentStatus::Running,
        }
    }

    pub fn observe<E: Environment + ?Sized>(&mut self, env: &mut E) -> Result<(), AgentError> {
        let obs = env.observe(&self.id)?;
        self.belief.absorb(&obs)?;
        Ok(())
    }

    fn send<E: Environment + ?Sized>(&mut self, env: &mut E, command: &Command) -> Result<(), AgentError> {
        let obs = env.command(&self.id, command.key)?;
        if let Some(id) = &command.tries {
            self.belief.memory.mark_tried(id);
        }
        if let Some(id) = &command.interacts_with {
            self.belief.memory.record_interaction(id);
        }
        self.belief.absorb(&obs)?;
        Ok(())
    }

    /// Sends a command outside of goal deliberation and records it in the trace.
    pub fn execute<E: Environment + ?Sized>(&mut self, env: &mut E, command: &Command) -> Result<(), AgentError> {
        self.send(env, command)?;
        self.record(Some(command.key), None);
        Ok(())
    }

    /// One deliberation cycle: observe, check the current goal, otherwise
    /// pick an action from its tactic and execute it, then charge the budget.
    pub fn deliberate<E: Environment + ?Sized>(&mut self, env: &mut E) -> Result<AgentStatus, AgentError> {
        let mut goal = self.goal.take().ok_or(AgentError::NoGoal)?;
        let result = self.cycle_on(&mut goal, env);
        self.goal = Some(goal);
        result?;
        Ok(self.status())
    }

    fn cycle_on<E: Environment + ?Sized>(&mut self, root: &mut GoalStructure, env: &mut E) -> Result<(), AgentError> {
        if root.evaluate().is_terminal() {
            return Ok(());
        }
        let path = root.current_path().expect("non-terminal goal has a current leaf");
        self.observe(env)?;
        let leaf = root.leaf_mut(&path).expect("current path leads to a leaf");
        leaf.set_status(GoalStatus::InProgress);
        let goal_name = leaf.name().to_string();
        let mut sent = None;
        if leaf.holds(&self.belief) {
            leaf.set_status(GoalStatus::Success);
        } else {
            let decision = match leaf.tactic().select(&self.belief, &mut self.rng) {
                Some(Selection::Act { command, .. }) => Decision::Send(command),
                Some(Selection::Abort) => Decision::Abort,
                None => Decision::Idle,
            };
            match decision {
                Decision::Abort => leaf.fail(FailReason::Aborted),
                Decision::Send(_) | Decision::Idle => {
                    if let Decision::Send(command) = &decision {
                        self.send(env, command)?;
                        sent = Some(command.key);
                    }
                    let leaf = root.leaf_mut(&path).expect("current path leads to a leaf");
                    let exhausted = leaf.spend();
                    if leaf.holds(&self.belief) {
                        leaf.set_status(GoalStatus::Success);
                    } else if exhausted {
                        leaf.fail(FailReason::BudgetExhausted);
                    }
                }
            }
        }
        root.evaluate();
        self.record(sent, Some(goal_name));
        Ok(())
    }

    fn record(&mut self, command: Option<char>, goal: Option<String>) {
        self.cycle += 1;
        let world = &self.belief.world;
        let level = world.current_level();
        let terrain = world
            .entities
            .values()
            .filter(|e| {
                e.alive
                    && e.position == world.agent_position
                    && e.level() == level
                    && e.id != self.id
                    && e.prop("holder").is_none()
            })
            .map(|e| e.entity_type.clone())
            .collect();
        let adjacent = world
            .entities
            .values()
            .filter(|e| {
                e.alive
                    && e.timestamp == world.timestamp
                    && e.level() == level
                    && e.position.is_adjacent4(world.agent_position)
            })
            .map(|e| e.entity_type.clone())
            .collect();
        self.trace.push(TraceEntry {
            cycle: self.cycle,
            turn: world.timestamp,
            command,
            digest: world.digest(),
            goal,
            snapshot: StepSnapshot {
                position: world.agent_position,
                level,
                properties: world.agent_properties.clone(),
                terrain,
                adjacent,
            },
        });
    }

    /// Deliberates until the goal is decided or `max_cycles` cycles have run.
    pub fn run<E: Environment + ?Sized>(&mut self, env: &mut E, max_cycles: u64) -> Result<RunSummary, AgentError> {
        let start = self.cycle;
        while self.cycle - start < max_cycles {
            if self.deliberate(env)? != AgentStatus::Running {
                break;
            }
        }
        Ok(RunSummary { status: self.status(), cycles: self.cycle - start })
    }
}
