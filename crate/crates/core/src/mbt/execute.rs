//! Turning abstract test cases into agent goals and running them on ButtonMaze.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::efsm::{simulate, Efsm, EfsmError, TransitionId, TransitionKind};
use crate::agent::tactics::{explore, navigate_to, reach_and_press};
use crate::agent::{AgentError, AgentStatus, GoalStatus, GoalStructure, Tactic, TestAgent, DEFAULT_BUDGET};
use crate::games::maze::{AGENT_ID, PRESS};
use crate::games::ButtonMaze;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MbtError {
    #[error(transparent)]
    Efsm(#[from] EfsmError),
    #[error("state {0} has no maze position")]
    MissingPosition(String),
    #[error("test {index} is infeasible after {prefix} steps")]
    Infeasible { index: usize, prefix: usize },
    #[error("level does not match the model: {0}")]
    Mismatch(String),
}

fn numbered(id: &str, prefix: char) -> Option<usize> {
    id.strip_prefix(prefix)?.trim_end_matches(['a', 'b']).parse().ok()
}

/// SEQ with one goal per transition. Travel and door crossings become
/// "agent stands on the destination square"; the k-th toggle of a button
/// becomes "its press count is at least k". An empty test is a goal that
/// holds at once.
pub fn translate(efsm: &Efsm, test: &[TransitionId], budget: u32) -> Result<GoalStructure, MbtError> {
    if test.is_empty() {
        return Ok(GoalStructure::always());
    }
    simulate(efsm, test)?;
    let mut presses = std::collections::BTreeMap::<String, i64>::new();
    let goals = test
        .iter()
        .map(|&t| {
            let dst = efsm.state_id(efsm.dst(t)).to_string();
            match efsm.kind(t) {
                TransitionKind::Toggle => {
                    let k = presses.entry(dst.clone()).or_default();
                    *k += 1;
                    let (k, id) = (*k, dst.clone());
                    Ok(GoalStructure::goal(
                        format!("toggled {dst} x{k}"),
                        move |b| b.world.entity(&id).and_then(|e| e.int("pressCount")).unwrap_or(0) >= k,
                        reach_and_press(dst, PRESS),
                        budget,
                    ))
                }
                TransitionKind::Travel | TransitionKind::DoorCross => {
                    let p = efsm.states()[efsm.dst(t)].position.ok_or_else(|| MbtError::MissingPosition(dst.clone()))?;
                    Ok(GoalStructure::goal(
                        format!("at {dst} {p}"),
                        move |b| b.position() == p,
                        Tactic::first_of(vec![navigate_to(p), explore(), Tactic::Abort]),
                        budget,
                    ))
                }
            }
        })
        .collect::<Result<Vec<_>, MbtError>>()?;
    Ok(GoalStructure::seq(goals))
}

/// Checks that model states sit where the level has the matching buttons and doors.
pub fn check_level(efsm: &Efsm, maze: &ButtonMaze) -> Result<(), MbtError> {
    let bad = |m: String| Err(MbtError::Mismatch(m));
    if efsm.variables().len() != maze.doors().len() {
        return bad(format!("{} door variables but {} doors", efsm.variables().len(), maze.doors().len()));
    }
    for v in efsm.variables() {
        match numbered(v, 'd') {
            Some(j) if maze.doors().contains_key(&j) => {}
            _ => return bad(format!("variable {v} names no door")),
        }
    }
    for s in efsm.states() {
        let p = s.position.ok_or_else(|| MbtError::MissingPosition(s.id.clone()))?;
        if let Some(i) = s.id.strip_prefix('b').and_then(|n| n.parse::<usize>().ok()) {
            if maze.buttons().get(&i) != Some(&p) {
                return bad(format!("button {} is not at {p}", s.id));
            }
        } else if let Some(j) = numbered(&s.id, 'd') {
            match maze.doors().get(&j) {
                Some((door, _)) if door.is_adjacent4(p) => {}
                _ => return bad(format!("state {} is not next to door d{j}", s.id)),
            }
        } else {
            return bad(format!("state {} is neither a button nor a door side", s.id));
        }
    }
    Ok(())
}

fn door_vector(efsm: &Efsm, maze: &ButtonMaze) -> Vec<bool> {
    efsm.variables().iter().map(|v| numbered(v, 'd').is_some_and(|j| maze.is_open(j))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExecOptions {
    /// Cycle budget of every translated goal.
    pub goal_budget: u32,
    pub seed: u64,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions { goal_budget: DEFAULT_BUDGET, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestResult {
    pub index: usize,
    pub length: usize,
    pub passed: bool,
    pub cycles: u64,
    pub failing_goal: Option<usize>,
    pub failure: Option<String>,
    /// Achieved goals after which the game's doors were compared with the model.
    pub conformance_checks: usize,
    /// First achieved goal after which the doors disagreed.
    pub conformance_mismatch: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExecutionReport {
    /// Wall-clock seconds.
    pub time: f64,
    pub n_tests: usize,
    pub n_fails: usize,
    pub total_cycles: u64,
    pub conformance_violations: usize,
    pub tests: Vec<TestResult>,
}

/// Runs every test on a fresh game from `factory` with its own agent.
pub fn execute_suite(
    mut factory: impl FnMut() -> ButtonMaze,
    efsm: &Efsm,
    tests: &[Vec<TransitionId>],
    options: ExecOptions,
) -> Result<ExecutionReport, MbtError> {
    let start = Instant::now();
    check_level(efsm, &factory())?;
    let mut results = Vec::with_capacity(tests.len());
    for (index, test) in tests.iter().enumerate() {
        let sim = simulate(efsm, test)?;
        if !sim.feasible {
            return Err(MbtError::Infeasible { index, prefix: sim.prefix_length });
        }
        let goal = translate(efsm, test, options.goal_budget)?;
        let mut maze = factory();
        let mut agent = TestAgent::new(AGENT_ID, options.seed.wrapping_add(index as u64)).with_goal(goal);
        let cap = (test.len() as u64 + 1) * u64::from(options.goal_budget) + 1;
        let (mut achieved, mut checks, mut mismatch, mut failure) = (0, 0, None, None);
        while agent.cycles() < cap {
            match agent.deliberate(&mut maze) {
                Ok(status) => {
                    let root = agent.goal().expect("agent has a goal");
                    let done = if test.is_empty() { 0 } else { root.succeeded_children() };
                    while achieved < done {
                        achieved += 1;
                        checks += 1;
                        if mismatch.is_none() && door_vector(efsm, &maze) != sim.door_trace[achieved] {
                            mismatch = Some(achieved - 1);
                        }
                    }
                    if status != AgentStatus::Running {
                        break;
                    }
                }
                Err(AgentError::Env(e)) => {
                    failure = Some(format!("game error: {e}"));
                    break;
                }
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        let root = agent.goal().expect("agent has a goal");
        let passed = failure.is_none() && root.status() == GoalStatus::Success;
        let failing_goal = if passed || test.is_empty() {
            None
        } else {
            root.children().iter().position(|c| c.status() != GoalStatus::Success)
        };
        if !passed && failure.is_none() {
            failure = Some(
                root.leaves()
                    .iter()
                    .find_map(|g| g.failure())
                    .map_or_else(|| "cycle cap reached".to_string(), |r| r.to_string()),
            );
        }
        results.push(TestResult {
            index,
            length: test.len(),
            passed,
            cycles: agent.cycles(),
            failing_goal,
            failure,
            conformance_checks: checks,
            conformance_mismatch: mismatch,
        });
    }
    Ok(ExecutionReport {
        time: start.elapsed().as_secs_f64(),
        n_tests: results.len(),
        n_fails: results.iter().filter(|r| !r.passed).count(),
        total_cycles: results.iter().map(|r| r.cycles).sum(),
        conformance_violations: results.iter().filter(|r| r.conformance_mismatch.is_some()).count(),
        tests: results,
    })
}
