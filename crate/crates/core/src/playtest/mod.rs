//! Reusable MiniDungeon testing goals, the shrine playtest, trace oracles
//! and the implanted-assertion soak.

pub mod goals;
pub mod oracles;
pub mod run;

pub use goals::{
    entity_in_close_range, interacted_shrine, obtain, shrine_playtest, solver, survival_tactic, survive_then,
    SolverSpec, CRITICAL_HP,
};
pub use oracles::{check_agent, check_trace, Violation};
pub use run::{oracle_soak, run_playtest, PlaytestConfig, PlaytestReport, SoakConfig, SoakReport, SoakViolation};
