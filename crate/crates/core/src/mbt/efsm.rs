use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::Pos;

/// Index of a transition within [`Efsm::transitions`].
pub type TransitionId = usize;
/// A test case: a sequence of transitions starting at the initial state.
pub type TestCase = Vec<TransitionId>;

/// Door vector packed as bits; variable `i` is bit `i`.
pub(crate) type Doors = u128;
pub const MAX_VARIABLES: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TransitionKind {
    Travel,
    DoorCross,
    Toggle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EfsmState {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Pos>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Transition {
    pub src: String,
    pub dst: String,
    pub kind: TransitionKind,
    /// Door that must be open (door crossings only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<String>,
    /// Doors flipped (toggles only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub update: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EfsmData {
    pub states: Vec<EfsmState>,
    pub initial_state: String,
    /// Door variables; all start closed (`false`).
    pub variables: Vec<String>,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EfsmError {
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("duplicate state {0:?}")]
    DuplicateState(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("more than {MAX_VARIABLES} variables")]
    TooManyVariables,
    #[error("transition {0}: {1}")]
    BadTransition(usize, String),
    #[error("test step {step}: unknown transition {transition}")]
    UnknownTransition { step: usize, transition: TransitionId },
    #[error("test step {step}: transition does not start where the previous one ended")]
    NotChained { step: usize },
}

/// Extended finite state machine over boolean door variables.
///
/// Travel transitions are unguarded, a door crossing links the two side
/// states `<door>a`/`<door>b` of one door and needs that door open, and a
/// toggle is a self-loop on a button state that flips its update set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EfsmData", into = "EfsmData")]
pub struct Efsm {
    data: EfsmData,
    initial: usize,
    src: Vec<usize>,
    dst: Vec<usize>,
    guard: Vec<Option<usize>>,
    flips: Vec<Doors>,
    outgoing: Vec<Vec<TransitionId>>,
    state_index: HashMap<String, usize>,
}

impl TryFrom<EfsmData> for Efsm {
    type Error = EfsmError;

    fn try_from(data: EfsmData) -> Result<Self, EfsmError> {
        Efsm::new(data)
    }
}

impl From<Efsm> for EfsmData {
    fn from(e: Efsm) -> Self {
        e.data
    }
}

impl Efsm {
    pub fn new(data: EfsmData) -> Result<Self, EfsmError> {
        if data.variables.len() > MAX_VARIABLES {
            return Err(EfsmError::TooManyVariables);
        }
        let mut state_index = HashMap::new();
        for (i, s) in data.states.iter().enumerate() {
            if state_index.insert(s.id.clone(), i).is_some() {
                return Err(EfsmError::DuplicateState(s.id.clone()));
            }
        }
        let var_index: HashMap<&str, usize> = data.variables.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let state = |id: &str| state_index.get(id).copied().ok_or_else(|| EfsmError::UnknownState(id.to_string()));
        let var = |id: &str| var_index.get(id).copied().ok_or_else(|| EfsmError::UnknownVariable(id.to_string()));
        let initial = state(&data.initial_state)?;
        let n = data.transitions.len();
        let (mut src, mut dst, mut guard, mut flips) =
            (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        let mut outgoing = vec![Vec::new(); data.states.len()];
        for (i, t) in data.transitions.iter().enumerate() {
            let bad = |m: &str| EfsmError::BadTransition(i, m.to_string());
            let (s, d) = (state(&t.src)?, state(&t.dst)?);
            let g = t.guard.as_deref().map(var).transpose()?;
            let mut mask: Doors = 0;
            for u in &t.update {
                mask ^= 1 << var(u)?;
            }
            match t.kind {
                TransitionKind::Travel if g.is_some() || mask != 0 => return Err(bad("travel carries a guard or update")),
                TransitionKind::DoorCross => {
                    let door = t.guard.as_deref().ok_or_else(|| bad("door crossing without guard"))?;
                    let sides = [format!("{door}a"), format!("{door}b")];
                    if s == d || !sides.contains(&t.src) || !sides.contains(&t.dst) || mask != 0 {
                        return Err(bad("door crossing must link the two sides of its door"));
                    }
                }
                TransitionKind::Toggle if s != d || g.is_some() => return Err(bad("toggle must be an unguarded self-loop")),
                _ => {}
            }
            src.push(s);
            dst.push(d);
            guard.push(g);
            flips.push(mask);
            outgoing[s].push(i);
        }
        Ok(Efsm { data, initial, src, dst, guard, flips, outgoing, state_index })
    }

    pub fn data(&self) -> &EfsmData {
        &self.data
    }

    pub fn states(&self) -> &[EfsmState] {
        &self.data.states
    }

    pub fn variables(&self) -> &[String] {
        &self.data.variables
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.data.transitions
    }

    pub fn transition_count(&self) -> usize {
        self.data.transitions.len()
    }

    pub fn state_count(&self) -> usize {
        self.data.states.len()
    }

    pub fn initial_state(&self) -> usize {
        self.initial
    }

    pub fn state_id(&self, state: usize) -> &str {
        &self.data.states[state].id
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.state_index.get(id).copied()
    }

    pub fn src(&self, t: TransitionId) -> usize {
        self.src[t]
    }

    pub fn dst(&self, t: TransitionId) -> usize {
        self.dst[t]
    }

    pub fn kind(&self, t: TransitionId) -> TransitionKind {
        self.data.transitions[t].kind
    }

    /// Variable index guarding `t`.
    pub fn guard_var(&self, t: TransitionId) -> Option<usize> {
        self.guard[t]
    }

    pub fn outgoing(&self, state: usize) -> &[TransitionId] {
        &self.outgoing[state]
    }

    pub(crate) fn enabled(&self, t: TransitionId, doors: Doors) -> bool {
        self.guard[t].is_none_or(|g| doors & (1 << g) != 0)
    }

    pub(crate) fn apply(&self, t: TransitionId, doors: Doors) -> Doors {
        doors ^ self.flips[t]
    }

    pub(crate) fn unpack(&self, doors: Doors) -> Vec<bool> {
        (0..self.data.variables.len()).map(|i| doors & (1 << i) != 0).collect()
    }

    /// Lengths of shortest transition paths between all pairs of states,
    /// ignoring guards. `usize::MAX` marks unreachable pairs.
    pub fn state_distances(&self) -> Vec<Vec<usize>> {
        let n = self.state_count();
        (0..n)
            .map(|from| {
                let mut dist = vec![usize::MAX; n];
                dist[from] = 0;
                let mut queue = VecDeque::from([from]);
                while let Some(s) = queue.pop_front() {
                    for &t in &self.outgoing[s] {
                        let d = self.dst[t];
                        if dist[d] == usize::MAX {
                            dist[d] = dist[s] + 1;
                            queue.push_back(d);
                        }
                    }
                }
                dist
            })
            .collect()
    }

    /// Transitions that some feasible test can fire, found by exhaustive
    /// search over (state, door vector) configurations.
    pub fn feasible_transitions(&self) -> Vec<bool> {
        let mut fired = vec![false; self.transition_count()];
        let mut seen = std::collections::HashSet::from([(self.initial, 0 as Doors)]);
        let mut queue = VecDeque::from([(self.initial, 0 as Doors)]);
        while let Some((s, doors)) = queue.pop_front() {
            for &t in &self.outgoing[s] {
                if self.enabled(t, doors) {
                    fired[t] = true;
                    let next = (self.dst[t], self.apply(t, doors));
                    if seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
        }
        fired
    }
}

/// Outcome of running a test case on the model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Simulation {
    pub feasible: bool,
    /// Number of leading transitions that could be taken.
    pub prefix_length: usize,
    /// Door vector before the first step and after each taken step.
    pub door_trace: Vec<Vec<bool>>,
}

/// Runs `test` from the initial state with all doors closed. A door crossing
/// whose door is closed ends the feasible prefix.
pub fn simulate(efsm: &Efsm, test: &[TransitionId]) -> Result<Simulation, EfsmError> {
    let mut state = efsm.initial_state();
    for (step, &t) in test.iter().enumerate() {
        if t >= efsm.transition_count() {
            return Err(EfsmError::UnknownTransition { step, transition: t });
        }
        if efsm.src(t) != state {
            return Err(EfsmError::NotChained { step });
        }
        state = efsm.dst(t);
    }
    let mut doors: Doors = 0;
    let mut door_trace = vec![efsm.unpack(doors)];
    for &t in test {
        if !efsm.enabled(t, doors) {
            return Ok(Simulation { feasible: false, prefix_length: door_trace.len() - 1, door_trace });
        }
        doors = efsm.apply(t, doors);
        door_trace.push(efsm.unpack(doors));
    }
    Ok(Simulation { feasible: true, prefix_length: test.len(), door_trace })
}
