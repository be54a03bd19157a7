//! ButtonMaze: a grid maze of buttons and doors. Pressing a button toggles
//! every door wired to it; a closed door is impassable. All doors start
//! closed and the agent starts on button `b0`.
//!
//! Levels are stored as CSV: grid rows of comma-separated cells from
//! `w`, `f`, `b<i>`, `d<i>` (wall, floor, button, door), a blank line, then
//! one `b<i>,d<j>` wiring pair per line.

use std::cell::Cell as StdCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::Mutant;
use crate::env::{EnvError, Environment};
use crate::world::{Pos, WorldEntity, WorldModel};

pub const AGENT_ID: &str = "agent";
pub const DEFAULT_VIEW: usize = 4;
/// Key that presses the button under the agent.
pub const PRESS: char = 'e';

thread_local! {
    static COMMANDS: StdCell<u64> = const { StdCell::new(0) };
}

/// Number of ButtonMaze commands executed on this thread so far.
pub fn commands_issued() -> u64 {
    COMMANDS.with(StdCell::get)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Cell {
    Wall,
    Floor,
    Button(usize),
    Door(usize),
}

impl Cell {
    fn code(self) -> String {
        match self {
            Cell::Wall => "w".into(),
            Cell::Floor => "f".into(),
            Cell::Button(i) => format!("b{i}"),
            Cell::Door(i) => format!("d{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MazeError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("line {line}: wiring refers to unknown {id}")]
    DanglingWiring { line: usize, id: String },
    #[error("level has no button b0 to start on")]
    NoStart,
}

/// ButtonMaze game state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ButtonMaze {
    /// `grid[y][x]`.
    grid: Vec<Vec<Cell>>,
    buttons: BTreeMap<usize, Pos>,
    doors: BTreeMap<usize, (Pos, bool)>,
    wiring: BTreeSet<(usize, usize)>,
    agent: Pos,
    turn: u64,
    presses: BTreeMap<usize, u64>,
    view: usize,
    #[serde(skip)]
    mutants: BTreeSet<Mutant>,
    crashed: bool,
}

fn parse_id(cell: &str, prefix: char) -> Option<usize> {
    let digits = cell.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl ButtonMaze {
    /// Parses a CSV level. Errors carry 1-based line and column numbers.
    pub fn load_csv(text: &str) -> Result<Self, MazeError> {
        let lines: Vec<&str> = text.lines().collect();
        let split = lines.iter().position(|l| l.trim().is_empty()).unwrap_or(lines.len());
        if split == 0 {
            return Err(MazeError::Parse { line: 1, column: 1, message: "empty grid".into() });
        }
        let mut grid = Vec::new();
        let mut buttons = BTreeMap::new();
        let mut doors = BTreeMap::new();
        for (y, line) in lines[..split].iter().enumerate() {
            let mut row = Vec::new();
            let mut column = 1;
            for (x, raw) in line.split(',').enumerate() {
                let err = |message: String| MazeError::Parse { line: y + 1, column, message };
                let code = raw.trim();
                let pos = Pos::new(x as i32, y as i32);
                let cell = match code {
                    "w" => Cell::Wall,
                    "f" => Cell::Floor,
                    _ => {
                        if let Some(i) = parse_id(code, 'b') {
                            if buttons.insert(i, pos).is_some() {
                                return Err(err(format!("duplicate button b{i}")));
                            }
                            Cell::Button(i)
                        } else if let Some(i) = parse_id(code, 'd') {
                            if doors.insert(i, (pos, false)).is_some() {
                                return Err(err(format!("duplicate door d{i}")));
                            }
                            Cell::Door(i)
                        } else {
                            return Err(err(format!("unknown cell {code:?}")));
                        }
                    }
                };
                row.push(cell);
                column += raw.len() + 1;
            }
            if let Some(first) = grid.first().map(Vec::len) {
                if row.len() != first {
                    return Err(MazeError::Parse {
                        line: y + 1,
                        column: 1,
                        message: format!("row has {} cells, expected {first}", row.len()),
                    });
                }
            }
            grid.push(row);
        }
        let mut wiring = BTreeSet::new();
        for (n, line) in lines.iter().enumerate().skip(split + 1) {
            let line_no = n + 1;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            let (b, d) = match parts.as_slice() {
                [b, d] => (*b, *d),
                _ => return Err(MazeError::Parse { line: line_no, column: 1, message: "expected b<i>,d<j>".into() }),
            };
            let b_id = parse_id(b, 'b')
                .ok_or_else(|| MazeError::Parse { line: line_no, column: 1, message: format!("bad button {b:?}") })?;
            let d_id = parse_id(d, 'd').ok_or_else(|| MazeError::Parse {
                line: line_no,
                column: line.find(',').map_or(1, |c| c + 2),
                message: format!("bad door {d:?}"),
            })?;
            if !buttons.contains_key(&b_id) {
                return Err(MazeError::DanglingWiring { line: line_no, id: b.to_string() });
            }
            if !doors.contains_key(&d_id) {
                return Err(MazeError::DanglingWiring { line: line_no, id: d.to_string() });
            }
            wiring.insert((b_id, d_id));
        }
        let agent = *buttons.get(&0).ok_or(MazeError::NoStart)?;
        Ok(ButtonMaze {
            grid,
            buttons,
            doors,
            wiring,
            agent,
            turn: 0,
            presses: BTreeMap::new(),
            view: DEFAULT_VIEW,
            mutants: BTreeSet::new(),
            crashed: false,
        })
    }

    /// Writes the level layout and wiring (not the dynamic state) as CSV.
    pub fn save_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.grid {
            let cells: Vec<String> = row.iter().map(|c| c.code()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out.push('\n');
        for (b, d) in &self.wiring {
            let _ = writeln!(out, "b{b},d{d}");
        }
        out
    }

    pub fn with_view(mut self, view: usize) -> Self {
        self.view = view.max(1);
        self
    }

    pub fn with_mutant(mut self, mutant: Mutant) -> Self {
        self.mutants.insert(mutant);
        self
    }

    pub fn width(&self) -> usize {
        self.grid[0].len()
    }

    pub fn height(&self) -> usize {
        self.grid.len()
    }

    pub fn cell(&self, p: Pos) -> Cell {
        if p.x < 0 || p.y < 0 {
            return Cell::Wall;
        }
        self.grid.get(p.y as usize).and_then(|r| r.get(p.x as usize)).copied().unwrap_or(Cell::Wall)
    }

    pub fn buttons(&self) -> &BTreeMap<usize, Pos> {
        &self.buttons
    }

    pub fn doors(&self) -> &BTreeMap<usize, (Pos, bool)> {
        &self.doors
    }

    pub fn wiring(&self) -> &BTreeSet<(usize, usize)> {
        &self.wiring
    }

    pub fn agent_position(&self) -> Pos {
        self.agent
    }

    pub fn turn(&self) -> u64 {
        self.turn
    }

    pub fn press_count(&self, button: usize) -> u64 {
        self.presses.get(&button).copied().unwrap_or(0)
    }

    pub fn is_open(&self, door: usize) -> bool {
        self.doors.get(&door).is_some_and(|d| d.1)
    }

    /// Open/closed state of every door, in door-id order.
    pub fn door_vector(&self) -> Vec<bool> {
        self.doors.values().map(|d| d.1).collect()
    }

    /// `walkable[y][x]` given the current door states, or with all doors open.
    pub fn walkable_grid(&self, all_doors_open: bool) -> Vec<Vec<bool>> {
        self.grid
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        Cell::Wall => false,
                        Cell::Door(i) => all_doors_open || self.is_open(*i),
                        _ => true,
                    })
                    .collect()
            })
            .collect()
    }

    /// Button whose press raises the injected exception under `crashButton`.
    pub fn crash_button(&self) -> Option<usize> {
        self.buttons.keys().next_back().copied()
    }

    fn passable(&self, p: Pos) -> bool {
        match self.cell(p) {
            Cell::Wall => false,
            Cell::Door(i) => self.is_open(i),
            _ => true,
        }
    }
}

impl Environment for ButtonMaze {
    /// Tiles, buttons and doors within Chebyshev distance of the view radius.
    fn observe(&mut self, agent_id: &str) -> Result<WorldModel, EnvError> {
        if agent_id != AGENT_ID {
            return Err(EnvError::UnknownAgent(agent_id.to_string()));
        }
        let t = self.turn;
        let v = self.view as i32;
        let mut obs = WorldModel::new(AGENT_ID, t, self.agent);
        obs.agent_properties.insert("turn".into(), (t as i64).into());
        for y in (self.agent.y - v).max(0)..=(self.agent.y + v).min(self.height() as i32 - 1) {
            for x in (self.agent.x - v).max(0)..=(self.agent.x + v).min(self.width() as i32 - 1) {
                let p = Pos::new(x, y);
                let cell = self.cell(p);
                let wall = cell == Cell::Wall;
                obs.insert(
                    WorldEntity::new(format!("t{x}_{y}"), if wall { "wall" } else { "floor" }, p, t).with("walkable", !wall),
                );
                match cell {
                    Cell::Button(i) => obs.insert(
                        WorldEntity::new(format!("b{i}"), "button", p, t)
                            .with("pressCount", self.press_count(i) as i64)
                            .with("interactable", true)
                            .with("interaction", "press"),
                    ),
                    Cell::Door(i) => {
                        let open = self.is_open(i);
                        obs.insert(
                            WorldEntity::new(format!("d{i}"), "door", p, t)
                                .with("open", open)
                                .with("walkable", true)
                                .with("blocking", !open),
                        )
                    }
                    _ => {}
                }
            }
        }
        Ok(obs)
    }

    /// `w`/`a`/`s`/`d` move unless the square is a wall or a closed door;
    /// `e` presses the button under the agent.
    fn command(&mut self, agent_id: &str, key: char) -> Result<WorldModel, EnvError> {
        if agent_id != AGENT_ID {
            return Err(EnvError::UnknownAgent(agent_id.to_string()));
        }
        if !matches!(key, 'w' | 'a' | 's' | 'd' | PRESS) {
            return Err(EnvError::InvalidKey(key));
        }
        if self.crashed {
            return Err(EnvError::Crash("game process is gone".into()));
        }
        COMMANDS.with(|c| c.set(c.get() + 1));
        if key == PRESS {
            if let Cell::Button(b) = self.cell(self.agent) {
                if self.mutants.contains(&Mutant::CrashButton) && Some(b) == self.crash_button() {
                    self.crashed = true;
                    return Err(EnvError::Crash(format!("exception while pressing b{b}")));
                }
                *self.presses.entry(b).or_default() += 1;
                let wired: Vec<usize> = self.wiring.iter().filter(|w| w.0 == b).map(|w| w.1).collect();
                for d in wired {
                    if let Some(door) = self.doors.get_mut(&d) {
                        door.1 = !door.1;
                    }
                }
            }
        } else {
            let target = self.agent.step(key).expect("movement key");
            if self.passable(target) {
                self.agent = target;
            }
        }
        self.turn += 1;
        self.observe(agent_id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three rooms in a row behind three doors, four buttons.
    pub(crate) const THREE_ROOMS: &str = "\
w,w,w,w,w,w,w,w,w,w
w,b0,f,d0,b1,f,d1,b2,f,w
w,b3,f,w,f,f,w,f,d2,w
w,w,w,w,w,w,w,w,f,w
w,w,w,w,w,w,w,w,w,w

b0,d0
b3,d0
b1,d1
b2,d2
";

    #[test]
    fn three_room_level_loads_closed() {
        let m = ButtonMaze::load_csv(THREE_ROOMS).unwrap();
        assert_eq!(m.buttons().len(), 4);
        assert_eq!(m.doors().len(), 3);
        assert!(m.door_vector().iter().all(|open| !open));
        assert_eq!(m.agent_position(), Pos::new(1, 1));
    }

    #[test]
    fn csv_round_trip() {
        let m = ButtonMaze::load_csv(THREE_ROOMS).unwrap();
        let again = ButtonMaze::load_csv(&m.save_csv()).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.save_csv(), m.save_csv());
    }

    #[test]
    fn parse_errors_have_positions() {
        let err = ButtonMaze::load_csv("w,w\nw,x1\n").unwrap_err();
        assert_eq!(err, MazeError::Parse { line: 2, column: 3, message: "unknown cell \"x1\"".into() });
        let err = ButtonMaze::load_csv("b0,d0\n\nb0,d7\n").unwrap_err();
        assert_eq!(err, MazeError::DanglingWiring { line: 3, id: "d7".into() });
        assert!(matches!(ButtonMaze::load_csv("f,f\n"), Err(MazeError::NoStart)));
        assert!(matches!(ButtonMaze::load_csv("b0,f\nf\n"), Err(MazeError::Parse { line: 2, .. })));
    }

    #[test]
    fn press_opens_wired_door() {
        let mut m = ButtonMaze::load_csv(THREE_ROOMS).unwrap();
        let obs = m.command(AGENT_ID, 'd').unwrap();
        assert_eq!(obs.agent_position, Pos::new(2, 1));
        m.command(AGENT_ID, 'd').unwrap();
        assert_eq!(m.agent_position(), Pos::new(2, 1), "closed door blocks");
        m.command(AGENT_ID, 'a').unwrap();
        let obs = m.command(AGENT_ID, PRESS).unwrap();
        assert!(m.is_open(0));
        assert_eq!(obs.entity("b0").unwrap().int("pressCount"), Some(1));
        assert!(!obs.entity("d0").unwrap().flag("blocking"));
        m.command(AGENT_ID, 'd').unwrap();
        m.command(AGENT_ID, 'd').unwrap();
        assert_eq!(m.agent_position(), Pos::new(3, 1));
    }

    #[test]
    fn crash_button_mutant_raises() {
        let mut m = ButtonMaze::load_csv(THREE_ROOMS).unwrap().with_mutant(Mutant::CrashButton);
        assert_eq!(m.crash_button(), Some(3));
        m.command(AGENT_ID, 's').unwrap();
        assert!(matches!(m.command(AGENT_ID, PRESS), Err(EnvError::Crash(_))));
        assert!(matches!(m.command(AGENT_ID, 'w'), Err(EnvError::Crash(_))));
    }

    #[test]
    fn commands_are_counted_per_thread() {
        let before = commands_issued();
        let mut m = ButtonMaze::load_csv(THREE_ROOMS).unwrap();
        m.command(AGENT_ID, 'd').unwrap();
        let _ = m.command(AGENT_ID, 'x');
        assert_eq!(commands_issued() - before, 1);
    }
}
