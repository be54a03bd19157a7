//! The interface between a test agent and a game under test.

use thiserror::Error;

use crate::world::WorldModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("invalid key {0:?}")]
    InvalidKey(char),
    #[error("unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("game is over")]
    GameOver,
    #[error("agent {0:?} is not allowed to move this turn")]
    OutOfTurn(String),
    /// The game raised an unexpected exception while handling a command.
    #[error("game crashed: {0}")]
    Crash(String),
    #[error("transport failure: {0}")]
    Transport(String),
}

/// A game as seen by a test agent.
///
/// Commands are single-character key codes: `w`/`a`/`s`/`d` move up, left,
/// down and right; the remaining keys are game specific.
pub trait Environment {
    /// What `agent_id` currently sees.
    fn observe(&mut self, agent_id: &str) -> Result<WorldModel, EnvError>;

    /// Simulates a key press by `agent_id` and returns the resulting observation.
    fn command(&mut self, agent_id: &str, key: char) -> Result<WorldModel, EnvError>;

    /// Violations reported so far by assertions implanted in the game loop.
    fn implanted_violations(&self) -> Vec<String> {
        Vec::new()
    }
}

impl<E: Environment + ?Sized> Environment for &mut E {
    fn observe(&mut self, agent_id: &str) -> Result<WorldModel, EnvError> {
        (**self).observe(agent_id)
    }

    fn command(&mut self, agent_id: &str, key: char) -> Result<WorldModel, EnvError> {
        (**self).command(agent_id, key)
    }

    fn implanted_violations(&self) -> Vec<String> {
        (**self).implanted_violations()
    }
}
