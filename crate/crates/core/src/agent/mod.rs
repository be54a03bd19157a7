//! BDI test-agent kernel.
//!
//! An agent keeps a [`Belief`], works on one [`GoalStructure`] and runs in
//! deliberation cycles: observe, merge the observation into its belief,
//! check the current goal and otherwise let the goal's [`Tactic`] pick a
//! command.

#[allow(clippy::module_inception)]
mod agent;
mod belief;
mod goal;
mod tactic;
pub mod tactics;

pub use agent::{AgentError, AgentStatus, RunSummary, StepSnapshot, TestAgent, TraceEntry};
pub use belief::{Belief, Memory};
pub use goal::{FailReason, GoalNode, GoalStatus, GoalStructure, Predicate, PrimitiveGoal, DEFAULT_BUDGET};
pub use tactic::{Command, Guard, PrimitiveAction, Selection, Tactic};
