//! Assertions over a recorded agent trace.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::agent::{TestAgent, TraceEntry};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub oracle: String,
    pub step_index: usize,
    pub detail: String,
}

pub const HP_POSITIVE: &str = "hpPositive";
pub const BAG_CAPACITY: &str = "bagCapacity";
pub const NO_WALL: &str = "noWallWalk";
pub const HP_DROPS: &str = "hpEventuallyDrops";
pub const IMPLANTED: &str = "implanted";

fn bag_size(step: &TraceEntry) -> usize {
    step.snapshot
        .properties
        .get("bagContents")
        .and_then(|v| v.as_str())
        .map_or(0, |s| s.split(',').filter(|s| !s.is_empty()).count())
}

fn int(step: &TraceEntry, name: &str) -> Option<i64> {
    step.snapshot.properties.get(name).and_then(|v| v.as_int())
}

/// Built-in MiniDungeon oracles. On every level where a monster was seen
/// next to the agent, health must drop below its maximum at some step on
/// that level.
pub fn check_trace(trace: &[TraceEntry]) -> Vec<Violation> {
    let monster_levels: BTreeSet<i64> = trace
        .iter()
        .filter(|s| s.snapshot.adjacent.iter().any(|t| t == "monster"))
        .map(|s| s.snapshot.level)
        .collect();
    let mut out = Vec::new();
    let mut v = |oracle: &str, step_index: usize, detail: String| {
        out.push(Violation { oracle: oracle.into(), step_index, detail })
    };
    for (i, step) in trace.iter().enumerate() {
        let running = step.snapshot.properties.get("status").and_then(|s| s.as_str()) == Some("running");
        if let Some(hp) = int(step, "hp") {
            if running && hp <= 0 {
                v(HP_POSITIVE, i, format!("hp {hp} while running"));
            }
        }
        if let Some(cap) = int(step, "bagCapacity") {
            let size = bag_size(step);
            if size as i64 > cap {
                v(BAG_CAPACITY, i, format!("bag holds {size} items, capacity {cap}"));
            }
        }
        if step.snapshot.terrain.iter().any(|t| t == "wall") {
            v(NO_WALL, i, format!("agent stands on a wall at {}", step.snapshot.position));
        }
    }
    for level in monster_levels {
        let steps: Vec<usize> = (0..trace.len()).filter(|&i| trace[i].snapshot.level == level).collect();
        let Some(&last) = steps.last() else { continue };
        let dropped = steps.iter().any(|&i| match (int(&trace[i], "hp"), int(&trace[i], "hpMax")) {
            (Some(hp), Some(max)) => hp < max,
            _ => false,
        });
        if !dropped {
            v(HP_DROPS, last, format!("hp never fell below its maximum on level {level}"));
        }
    }
    out
}

/// [`check_trace`] on the agent's own trace.
pub fn check_agent(agent: &TestAgent) -> Vec<Violation> {
    check_trace(agent.trace())
}
