//! ButtonMaze level generator that emits the level together with its EFSM.
//!
//! Rooms sit in a grid of slots. A random spanning tree of the room
//! adjacency keeps the level connected; its edges get doors (or plain
//! openings when there are fewer doors than tree edges) and any remaining
//! doors go on other adjacent room pairs. Rooms joined by openings form a
//! zone. Every door is wired to at least one button in a zone that can be
//! reached before it, so the level stays solvable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::maze::ButtonMaze;
use crate::mbt::efsm::{Efsm, EfsmData, EfsmState, Transition, TransitionKind};
use crate::world::Pos;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct LevelParams {
    pub rooms: usize,
    pub buttons: usize,
    pub doors: usize,
    /// Probability of each extra button-door wire.
    pub wiring_density: f64,
    /// Side length of a room's interior.
    pub room_size: usize,
    pub seed: u64,
}

impl Default for LevelParams {
    fn default() -> Self {
        LevelParams { rooms: 4, buttons: 4, doors: 3, wiring_density: 0.02, room_size: 5, seed: 0 }
    }
}

impl LevelParams {
    /// Sized like the largest desk-scale level: 144 states, 40 variables.
    pub fn l1(seed: u64) -> Self {
        LevelParams { rooms: 37, buttons: 64, doors: 40, wiring_density: 0.02, room_size: 5, seed }
    }

    /// Four connected rooms without doors: every button is reachable.
    pub fn open(buttons: usize, seed: u64) -> Self {
        LevelParams { rooms: 4, buttons, doors: 0, wiring_density: 0.0, room_size: 5, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevelError {
    #[error("infeasible level parameters: {0}")]
    Infeasible(String),
}

/// A generated level: CSV text, the loaded game and its EFSM.
#[derive(Clone, Debug)]
pub struct GeneratedLevel {
    pub csv: String,
    pub maze: ButtonMaze,
    pub efsm: Efsm,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Link {
    a: usize,
    b: usize,
    /// The wall cell between the two rooms.
    cell: Pos,
    /// Floor cells on the `a` (west/north) and `b` (east/south) side.
    side_a: Pos,
    side_b: Pos,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

pub fn generate_level(params: &LevelParams) -> Result<GeneratedLevel, LevelError> {
    let bad = |m: String| Err(LevelError::Infeasible(m));
    let (r, s) = (params.rooms, params.room_size);
    if r == 0 {
        return bad("at least one room is needed".into());
    }
    if params.buttons == 0 {
        return bad("the agent starts on button b0, so at least one button is needed".into());
    }
    if s < 3 {
        return bad("rooms must be at least 3 squares wide".into());
    }
    if !(0.0..=1.0).contains(&params.wiring_density) {
        return bad("wiring density must be within [0, 1]".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let cols = (r as f64).sqrt().ceil() as usize;
    let rows = r.div_ceil(cols);
    let (width, height) = (cols * (s + 1) + 1, rows * (s + 1) + 1);
    let origin = |room: usize| Pos::new((1 + (room % cols) * (s + 1)) as i32, (1 + (room / cols) * (s + 1)) as i32);
    let half = (s / 2) as i32;
    let mut links = Vec::new();
    for room in 0..r {
        let o = origin(room);
        if room % cols + 1 < cols && room + 1 < r {
            let cell = Pos::new(o.x + s as i32, o.y + half);
            links.push(Link { a: room, b: room + 1, cell, side_a: Pos::new(cell.x - 1, cell.y), side_b: Pos::new(cell.x + 1, cell.y) });
        }
        if room + cols < r {
            let cell = Pos::new(o.x + half, o.y + s as i32);
            links.push(Link { a: room, b: room + cols, cell, side_a: Pos::new(cell.x, cell.y - 1), side_b: Pos::new(cell.x, cell.y + 1) });
        }
    }
    if params.doors > links.len() {
        return bad(format!("{} doors requested but only {} room pairs are adjacent", params.doors, links.len()));
    }
    links.shuffle(&mut rng);
    let mut parent: Vec<usize> = (0..r).collect();
    let (mut tree, mut rest) = (Vec::new(), Vec::new());
    for link in links {
        let (x, y) = (find(&mut parent, link.a), find(&mut parent, link.b));
        if x == y {
            rest.push(link);
        } else {
            parent[x] = y;
            tree.push(link);
        }
    }
    let (door_links, openings): (Vec<Link>, Vec<Link>) = if params.doors >= tree.len() {
        let extra = params.doors - tree.len();
        let mut doors = tree;
        doors.extend(rest.into_iter().take(extra));
        (doors, Vec::new())
    } else {
        let openings = tree.split_off(params.doors);
        (tree, openings)
    };
    let mut zone_parent: Vec<usize> = (0..r).collect();
    for o in &openings {
        let (x, y) = (find(&mut zone_parent, o.a), find(&mut zone_parent, o.b));
        zone_parent[x] = y;
    }
    let zone_of_room: Vec<usize> = (0..r).map(|room| find(&mut zone_parent, room)).collect();

    // Grid: walls everywhere, then room interiors, openings and doors.
    let mut grid = vec![vec!["w".to_string(); width]; height];
    for room in 0..r {
        let o = origin(room);
        for dy in 0..s as i32 {
            for dx in 0..s as i32 {
                grid[(o.y + dy) as usize][(o.x + dx) as usize] = "f".into();
            }
        }
    }
    for o in &openings {
        grid[o.cell.y as usize][o.cell.x as usize] = "f".into();
    }
    for (j, d) in door_links.iter().enumerate() {
        grid[d.cell.y as usize][d.cell.x as usize] = format!("d{j}");
    }

    // Buttons: b0 in room 0, the rest spread round-robin, never on a door side.
    let reserved: BTreeSet<Pos> = door_links.iter().flat_map(|d| [d.side_a, d.side_b]).collect();
    let mut free_cells: Vec<Vec<Pos>> = (0..r)
        .map(|room| {
            let o = origin(room);
            let mut cells: Vec<Pos> = (0..s as i32)
                .flat_map(|dy| (0..s as i32).map(move |dx| Pos::new(o.x + dx, o.y + dy)))
                .filter(|p| !reserved.contains(p))
                .collect();
            cells.shuffle(&mut rng);
            cells
        })
        .collect();
    let mut button_room = Vec::with_capacity(params.buttons);
    let mut button_pos = Vec::with_capacity(params.buttons);
    for b in 0..params.buttons {
        let room = b % r;
        let Some(p) = free_cells[room].pop() else {
            return bad(format!("room {room} has no space left for button b{b}"));
        };
        grid[p.y as usize][p.x as usize] = format!("b{b}");
        button_room.push(room);
        button_pos.push(p);
    }

    // Zone order: breadth-first over doors from the start zone.
    let zone_list: Vec<usize> = zone_of_room.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut order: BTreeMap<usize, usize> = BTreeMap::new();
    let start_zone = zone_of_room[0];
    order.insert(start_zone, 0);
    let mut queue = VecDeque::from([start_zone]);
    while let Some(z) = queue.pop_front() {
        for d in &door_links {
            let (za, zb) = (zone_of_room[d.a], zone_of_room[d.b]);
            for (from, to) in [(za, zb), (zb, za)] {
                if from == z && !order.contains_key(&to) {
                    order.insert(to, order.len());
                    queue.push_back(to);
                }
            }
        }
    }
    debug_assert_eq!(order.len(), zone_list.len());
    let button_zone_order: Vec<usize> = button_room.iter().map(|&room| order[&zone_of_room[room]]).collect();
    let mut wiring: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (j, d) in door_links.iter().enumerate() {
        let earlier = order[&zone_of_room[d.a]].min(order[&zone_of_room[d.b]]);
        let candidates: Vec<usize> = (0..params.buttons).filter(|&b| button_zone_order[b] <= earlier).collect();
        let b = *candidates.choose(&mut rng).expect("b0 is in the start zone");
        wiring.insert((b, j));
    }
    for b in 0..params.buttons {
        for j in 0..door_links.len() {
            if rng.gen_bool(params.wiring_density) {
                wiring.insert((b, j));
            }
        }
    }

    let mut csv = String::new();
    for row in &grid {
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    csv.push('\n');
    for (b, d) in &wiring {
        csv.push_str(&format!("b{b},d{d}\n"));
    }

    // EFSM: one state per button, two per door.
    let mut states = Vec::new();
    let mut zone_members: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for b in 0..params.buttons {
        let id = format!("b{b}");
        states.push(EfsmState { id: id.clone(), position: Some(button_pos[b]) });
        zone_members.entry(zone_of_room[button_room[b]]).or_default().push(id);
    }
    for (j, d) in door_links.iter().enumerate() {
        for (suffix, pos, room) in [("a", d.side_a, d.a), ("b", d.side_b, d.b)] {
            let id = format!("d{j}{suffix}");
            states.push(EfsmState { id: id.clone(), position: Some(pos) });
            zone_members.entry(zone_of_room[room]).or_default().push(id);
        }
    }
    let mut transitions = Vec::new();
    for members in zone_members.values() {
        for u in members {
            for v in members {
                if u != v {
                    transitions.push(Transition { src: u.clone(), dst: v.clone(), kind: TransitionKind::Travel, guard: None, update: vec![] });
                }
            }
        }
    }
    for j in 0..door_links.len() {
        let (a, b, door) = (format!("d{j}a"), format!("d{j}b"), format!("d{j}"));
        for (src, dst) in [(&a, &b), (&b, &a)] {
            transitions.push(Transition {
                src: src.clone(),
                dst: dst.clone(),
                kind: TransitionKind::DoorCross,
                guard: Some(door.clone()),
                update: vec![],
            });
        }
    }
    for b in 0..params.buttons {
        let id = format!("b{b}");
        let update = wiring.iter().filter(|w| w.0 == b).map(|w| format!("d{}", w.1)).collect();
        transitions.push(Transition { src: id.clone(), dst: id, kind: TransitionKind::Toggle, guard: None, update });
    }
    let efsm = Efsm::new(EfsmData {
        states,
        initial_state: "b0".into(),
        variables: (0..door_links.len()).map(|j| format!("d{j}")).collect(),
        transitions,
    })
    .map_err(|e| LevelError::Infeasible(e.to_string()))?;
    let maze = ButtonMaze::load_csv(&csv).map_err(|e| LevelError::Infeasible(e.to_string()))?;
    Ok(GeneratedLevel { csv, maze, efsm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mbt::efsm::TransitionKind;
    use crate::nav::NavGraph;

    #[test]
    fn node_count_is_buttons_plus_two_per_door() {
        let level = generate_level(&LevelParams { rooms: 4, buttons: 4, doors: 3, seed: 1, ..LevelParams::default() }).unwrap();
        assert_eq!(level.efsm.state_count(), 10);
        assert_eq!(level.maze.buttons().len(), 4);
        assert_eq!(level.maze.doors().len(), 3);
    }

    #[test]
    fn no_doors_means_no_guards() {
        let level = generate_level(&LevelParams { rooms: 4, buttons: 3, doors: 0, seed: 2, ..LevelParams::default() }).unwrap();
        assert!(level.efsm.variables().is_empty());
        assert!(level.efsm.transitions().iter().all(|t| t.guard.is_none()));
    }

    #[test]
    fn infeasible_parameters() {
        assert!(generate_level(&LevelParams { buttons: 0, ..LevelParams::default() }).is_err());
        assert!(generate_level(&LevelParams { rooms: 0, ..LevelParams::default() }).is_err());
        assert!(generate_level(&LevelParams { rooms: 2, doors: 5, ..LevelParams::default() }).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let p = LevelParams { rooms: 6, buttons: 8, doors: 6, seed: 5, ..LevelParams::default() };
        let (a, b) = (generate_level(&p).unwrap(), generate_level(&p).unwrap());
        assert_eq!(a.csv, b.csv);
        assert_eq!(a.efsm, b.efsm);
    }

    #[test]
    fn travel_transitions_are_walkable_with_doors_closed() {
        for seed in 0..5 {
            let level = generate_level(&LevelParams { rooms: 9, buttons: 12, doors: 7, seed, ..LevelParams::default() }).unwrap();
            let nav = NavGraph::from_grid(&level.maze.walkable_grid(false)).unwrap();
            let pos = |id: &str| level.efsm.states()[level.efsm.state_index(id).unwrap()].position.unwrap();
            for t in level.efsm.transitions().iter().filter(|t| t.kind == TransitionKind::Travel) {
                let (a, b) = (nav.node_at(pos(&t.src)).unwrap(), nav.node_at(pos(&t.dst)).unwrap());
                assert!(nav.find_path(a, b).unwrap().is_some(), "seed {seed}: {} -> {}", t.src, t.dst);
            }
        }
    }
}
