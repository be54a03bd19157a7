//! Small hand-built models with matching ButtonMaze levels.

use super::efsm::{Efsm, EfsmData, EfsmState, Transition, TransitionKind};
use crate::world::Pos;

/// Two buttons, one door: `b0` opens `d0`, `b1` waits behind it.
pub const TINY_LEVEL: &str = "\
w,w,w,w,w,w,w
w,b0,f,d0,f,b1,w
w,w,w,w,w,w,w

b0,d0
";

/// One button opening the door in front of it.
pub const SINGLE_LEVEL: &str = "\
w,w,w,w,w,w
w,b0,f,d0,f,w
w,w,w,w,w,w

b0,d0
";

/// Like [`TINY_LEVEL`], but `b1` is wired to `d0` as well.
pub const DOUBLE_LEVEL: &str = "\
w,w,w,w,w,w,w
w,b0,f,d0,f,b1,w
w,w,w,w,w,w,w

b0,d0
b1,d0
";

fn state(id: &str, x: i32, y: i32) -> EfsmState {
    EfsmState { id: id.into(), position: Some(Pos::new(x, y)) }
}

fn travel(a: &str, b: &str) -> [Transition; 2] {
    let t = |s: &str, d: &str| Transition { src: s.into(), dst: d.into(), kind: TransitionKind::Travel, guard: None, update: vec![] };
    [t(a, b), t(b, a)]
}

fn cross(door: &str) -> [Transition; 2] {
    let (a, b) = (format!("{door}a"), format!("{door}b"));
    let t = |s: &str, d: &str| Transition {
        src: s.into(),
        dst: d.into(),
        kind: TransitionKind::DoorCross,
        guard: Some(door.into()),
        update: vec![],
    };
    [t(&a, &b), t(&b, &a)]
}

fn toggle(button: &str, doors: &[&str]) -> Transition {
    Transition {
        src: button.into(),
        dst: button.into(),
        kind: TransitionKind::Toggle,
        guard: None,
        update: doors.iter().map(|d| d.to_string()).collect(),
    }
}

fn build(states: Vec<EfsmState>, transitions: Vec<Transition>) -> Efsm {
    Efsm::new(EfsmData { states, initial_state: "b0".into(), variables: vec!["d0".into()], transitions })
        .expect("fixture is well formed")
}

/// 2 buttons, 1 door, 7 transitions; `b1` has no toggle.
pub fn tiny() -> Efsm {
    let mut ts = Vec::new();
    ts.push(toggle("b0", &["d0"]));
    ts.extend(travel("b0", "d0a"));
    ts.extend(cross("d0"));
    ts.extend(travel("d0b", "b1"));
    build(vec![state("b0", 1, 1), state("b1", 5, 1), state("d0a", 2, 1), state("d0b", 4, 1)], ts)
}

/// 1 button, 1 door, 5 transitions.
pub fn single() -> Efsm {
    let mut ts = vec![toggle("b0", &["d0"])];
    ts.extend(travel("b0", "d0a"));
    ts.extend(cross("d0"));
    build(vec![state("b0", 1, 1), state("d0a", 2, 1), state("d0b", 4, 1)], ts)
}

/// 2 buttons both wired to the single door, 8 transitions.
pub fn double() -> Efsm {
    let mut ts = tiny().transitions().to_vec();
    ts.push(toggle("b1", &["d0"]));
    build(tiny().states().to_vec(), ts)
}

/// Every small fixture (at most 10 transitions) with its level.
pub fn all() -> Vec<(&'static str, Efsm, &'static str)> {
    vec![("tiny", tiny(), TINY_LEVEL), ("single", single(), SINGLE_LEVEL), ("double", double(), DOUBLE_LEVEL)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::ButtonMaze;

    #[test]
    fn fixture_sizes() {
        assert_eq!(tiny().transition_count(), 7);
        assert_eq!(single().transition_count(), 5);
        assert_eq!(double().transition_count(), 8);
        for (_, e, _) in all() {
            assert!(e.transition_count() <= 10);
            assert!(e.feasible_transitions().iter().all(|&f| f));
        }
    }

    #[test]
    fn fixture_levels_match_state_positions() {
        for (name, e, csv) in all() {
            let maze = ButtonMaze::load_csv(csv).unwrap();
            for s in e.states() {
                let p = s.position.unwrap();
                if let Some(i) = s.id.strip_prefix('b') {
                    assert_eq!(maze.buttons()[&i.parse::<usize>().unwrap()], p, "{name} {}", s.id);
                } else {
                    let door = maze.doors()[&0].0;
                    assert!(door.is_adjacent4(p), "{name} {}", s.id);
                }
            }
        }
    }
}
