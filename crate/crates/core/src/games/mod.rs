//! Built-in games under test: the MiniDungeon roguelike and the ButtonMaze
//! buttons-and-doors maze, plus the ButtonMaze level generator.

pub mod dungeon;
pub mod levelgen;
pub mod maze;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dungeon::{DungeonConfig, DungeonError, GameStatus, MiniDungeon};
pub use levelgen::{generate_level, GeneratedLevel, LevelParams};
pub use maze::{ButtonMaze, MazeError};

/// Seeded faults that can be switched on in the built-in games.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Mutant {
    /// MiniDungeon monsters move without checking that the target square is free.
    BuggyMonsterMove,
    /// MiniDungeon players can walk into interior walls.
    WallWalk,
    /// Pressing the highest-numbered ButtonMaze button raises an exception.
    CrashButton,
}

impl Mutant {
    pub const ALL: [Mutant; 3] = [Mutant::BuggyMonsterMove, Mutant::WallWalk, Mutant::CrashButton];

    pub fn name(self) -> &'static str {
        match self {
            Mutant::BuggyMonsterMove => "buggyMonsterMove",
            Mutant::WallWalk => "wallWalk",
            Mutant::CrashButton => "crashButton",
        }
    }
}

impl fmt::Display for Mutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutant::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown mutant {s:?} (expected one of buggyMonsterMove, wallWalk, crashButton)"))
    }
}
