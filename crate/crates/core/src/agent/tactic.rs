use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::belief::Belief;

/// A key press an action wants to send, plus bookkeeping for agent memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub key: char,
    /// Resource instance to remember as tried once the key is sent.
    pub tries: Option<String>,
    /// Entity this key interacts with.
    pub interacts_with: Option<String>,
}

impl Command {
    pub fn key(key: char) -> Self {
        Command { key, tries: None, interacts_with: None }
    }

    pub fn trying(mut self, id: impl Into<String>) -> Self {
        self.tries = Some(id.into());
        self
    }

    pub fn interacting_with(mut self, id: impl Into<String>) -> Self {
        self.interacts_with = Some(id.into());
        self
    }
}

pub type Guard = Arc<dyn Fn(&Belief) -> Option<Command> + Send + Sync>;

/// Guarded action. The guard doubles as the effect: the action is enabled
/// exactly when the guard proposes a command for the current belief.
#[derive(Clone)]
pub struct PrimitiveAction {
    name: String,
    guard: Guard,
}

impl PrimitiveAction {
    pub fn new(name: impl Into<String>, guard: impl Fn(&Belief) -> Option<Command> + Send + Sync + 'static) -> Self {
        PrimitiveAction { name: name.into(), guard: Arc::new(guard) }
    }

    /// Action that always sends `key`.
    pub fn always(name: impl Into<String>, key: char) -> Self {
        PrimitiveAction::new(name, move |_| Some(Command::key(key)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn propose(&self, belief: &Belief) -> Option<Command> {
        (self.guard)(belief)
    }

    pub fn is_enabled(&self, belief: &Belief) -> bool {
        self.propose(belief).is_some()
    }
}

impl fmt::Debug for PrimitiveAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "action({})", self.name)
    }
}

/// Tree of guarded actions under random (`AnyOf`) and priority (`FirstOf`) selectors.
#[derive(Clone, Debug)]
pub enum Tactic {
    Action(PrimitiveAction),
    AnyOf(Vec<Tactic>),
    FirstOf(Vec<Tactic>),
    /// Always enabled; selecting it fails the current goal.
    Abort,
}

/// Outcome of [`Tactic::select`].
#[derive(Clone, Debug)]
pub enum Selection<'a> {
    Act { action: &'a PrimitiveAction, command: Command },
    Abort,
}

impl Selection<'_> {
    pub fn name(&self) -> &str {
        match self {
            Selection::Act { action, .. } => action.name(),
            Selection::Abort => "ABORT",
        }
    }
}

impl Tactic {
    pub fn action(name: impl Into<String>, guard: impl Fn(&Belief) -> Option<Command> + Send + Sync + 'static) -> Self {
        Tactic::Action(PrimitiveAction::new(name, guard))
    }

    /// # Panics
    /// If `children` is empty.
    pub fn any_of(children: Vec<Tactic>) -> Self {
        assert!(!children.is_empty(), "ANYof needs at least one child");
        Tactic::AnyOf(children)
    }

    /// # Panics
    /// If `children` is empty.
    pub fn first_of(children: Vec<Tactic>) -> Self {
        assert!(!children.is_empty(), "FIRSTof needs at least one child");
        Tactic::FirstOf(children)
    }

    /// Picks an enabled action. `AnyOf` draws uniformly over all enabled
    /// selections of its descendants (nested `AnyOf`s are flattened);
    /// `FirstOf` takes the first child, left to right, that yields one.
    pub fn select<R: Rng + ?Sized>(&self, belief: &Belief, rng: &mut R) -> Option<Selection<'_>> {
        match self {
            Tactic::Action(a) => a.propose(belief).map(|command| Selection::Act { action: a, command }),
            Tactic::Abort => Some(Selection::Abort),
            Tactic::FirstOf(children) => children.iter().find_map(|c| c.select(belief, rng)),
            Tactic::AnyOf(_) => {
                let mut enabled = Vec::new();
                self.collect_enabled(belief, rng, &mut enabled);
                if enabled.is_empty() {
                    None
                } else {
                    let pick = rng.gen_range(0..enabled.len());
                    Some(enabled.swap_remove(pick))
                }
            }
        }
    }

    fn collect_enabled<'a, R: Rng + ?Sized>(&'a self, belief: &Belief, rng: &mut R, out: &mut Vec<Selection<'a>>) {
        match self {
            Tactic::AnyOf(children) => {
                for c in children {
                    c.collect_enabled(belief, rng, out);
                }
            }
            other => out.extend(other.select(belief, rng)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn guarded(name: &str, enabled: bool, key: char) -> Tactic {
        Tactic::action(name, move |_| enabled.then(|| Command::key(key)))
    }

    #[test]
    fn first_of_takes_first_enabled() {
        let t = Tactic::first_of(vec![guarded("a1", false, 'w'), guarded("a2", true, 's')]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = t.select(&Belief::default(), &mut rng).unwrap();
        assert_eq!(s.name(), "a2");
    }

    #[test]
    fn any_of_with_nothing_enabled_is_none() {
        let t = Tactic::any_of(vec![guarded("a1", false, 'w'), guarded("a2", false, 's')]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(t.select(&Belief::default(), &mut rng).is_none());
    }

    #[test]
    fn abort_is_always_enabled() {
        let t = Tactic::first_of(vec![guarded("a1", false, 'w'), Tactic::Abort]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(t.select(&Belief::default(), &mut rng), Some(Selection::Abort)));
    }

    #[test]
    fn any_of_draws_uniformly() {
        let t = Tactic::any_of(vec![guarded("a1", true, 'w'), guarded("a2", true, 's')]);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let belief = Belief::default();
        let n = 10_000;
        let a1 = (0..n).filter(|_| t.select(&belief, &mut rng).unwrap().name() == "a1").count();
        let freq = a1 as f64 / n as f64;
        assert!((0.47..=0.53).contains(&freq), "a1 frequency {freq}");
    }

    #[test]
    fn nested_any_of_is_flattened() {
        let t = Tactic::any_of(vec![
            guarded("a", true, 'w'),
            Tactic::any_of(vec![guarded("b", true, 'a'), guarded("c", true, 's')]),
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let belief = Belief::default();
        let n = 9_000;
        let a = (0..n).filter(|_| t.select(&belief, &mut rng).unwrap().name() == "a").count();
        let freq = a as f64 / n as f64;
        assert!((0.30..=0.37).contains(&freq), "a frequency {freq}");
    }

    #[test]
    #[should_panic(expected = "at least one child")]
    fn empty_combinator_panics() {
        let _ = Tactic::first_of(Vec::new());
    }
}
