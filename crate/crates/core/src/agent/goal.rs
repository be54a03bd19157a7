use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::belief::Belief;
use super::tactic::Tactic;

/// Default budget of a primitive goal, in deliberation cycles.
pub const DEFAULT_BUDGET: u32 = 150;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GoalStatus {
    Pending,
    InProgress,
    Success,
    Fail,
}

impl GoalStatus {
    pub fn is_terminal(self) -> bool {
        matches!(self, GoalStatus::Success | GoalStatus::Fail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FailReason {
    BudgetExhausted,
    Aborted,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailReason::BudgetExhausted => "budget exhausted",
            FailReason::Aborted => "aborted",
        })
    }
}

pub type Predicate = Arc<dyn Fn(&Belief) -> bool + Send + Sync>;

/// Leaf goal: a predicate over belief, the tactic to reach it and a cycle budget.
#[derive(Clone)]
pub struct PrimitiveGoal {
    name: String,
    predicate: Predicate,
    tactic: Tactic,
    budget: u32,
    remaining: u32,
    status: GoalStatus,
    failure: Option<FailReason>,
}

impl PrimitiveGoal {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tactic(&self) -> &Tactic {
        &self.tactic
    }

    pub fn holds(&self, belief: &Belief) -> bool {
        (self.predicate)(belief)
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn remaining(&self) -> u32 {
        self.remaining
    }

    pub fn status(&self) -> GoalStatus {
        self.status
    }

    pub fn failure(&self) -> Option<FailReason> {
        self.failure
    }

    pub fn set_status(&mut self, status: GoalStatus) {
        self.status = status;
    }

    pub fn fail(&mut self, reason: FailReason) {
        self.status = GoalStatus::Fail;
        self.failure = Some(reason);
    }

    /// Consumes one cycle; returns `true` when the budget is used up.
    pub fn spend(&mut self) -> bool {
        self.remaining = self.remaining.saturating_sub(1);
        self.remaining == 0
    }

    fn reset(&mut self) {
        self.remaining = self.budget;
        self.status = GoalStatus::Pending;
        self.failure = None;
    }
}

impl fmt::Debug for PrimitiveGoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimitiveGoal")
            .field("name", &self.name)
            .field("status", &self.status)
            .field("remaining", &self.remaining)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum GoalNode {
    Primitive(PrimitiveGoal),
    /// All children, in order.
    Seq(Vec<GoalStructure>),
    /// The first child that succeeds, trying children in order.
    FirstOf(Vec<GoalStructure>),
    /// Re-attempts a failed child up to `max_retries` more times.
    Repeat { child: Box<GoalStructure>, max_retries: u32, attempts: u32 },
}

/// Tree of primitive goals under SEQ / FIRSTof / REPEAT, with a status per node.
#[derive(Clone, Debug)]
pub struct GoalStructure {
    node: GoalNode,
    status: GoalStatus,
}

impl GoalStructure {
    fn new(node: GoalNode) -> Self {
        GoalStructure { node, status: GoalStatus::Pending }
    }

    /// # Panics
    /// If `budget` is zero.
    pub fn goal(
        name: impl Into<String>,
        predicate: impl Fn(&Belief) -> bool + Send + Sync + 'static,
        tactic: Tactic,
        budget: u32,
    ) -> Self {
        assert!(budget >= 1, "goal budget must be at least one cycle");
        GoalStructure::new(GoalNode::Primitive(PrimitiveGoal {
            name: name.into(),
            predicate: Arc::new(predicate),
            tactic,
            budget,
            remaining: budget,
            status: GoalStatus::Pending,
            failure: None,
        }))
    }

    /// Goal that holds in every belief.
    pub fn always() -> Self {
        GoalStructure::goal("true", |_| true, Tactic::Abort, 1)
    }

    /// Goal that only checks `predicate`: it succeeds if the predicate holds
    /// when first looked at and fails otherwise.
    pub fn check(name: impl Into<String>, predicate: impl Fn(&Belief) -> bool + Send + Sync + 'static) -> Self {
        GoalStructure::goal(name, predicate, Tactic::Abort, 1)
    }

    /// # Panics
    /// If `children` is empty.
    pub fn seq(children: Vec<GoalStructure>) -> Self {
        assert!(!children.is_empty(), "SEQ needs at least one child");
        GoalStructure::new(GoalNode::Seq(children))
    }

    /// # Panics
    /// If `children` is empty.
    pub fn first_of(children: Vec<GoalStructure>) -> Self {
        assert!(!children.is_empty(), "FIRSTof needs at least one child");
        GoalStructure::new(GoalNode::FirstOf(children))
    }

    pub fn repeat(child: GoalStructure, max_retries: u32) -> Self {
        GoalStructure::new(GoalNode::Repeat { child: Box::new(child), max_retries, attempts: 1 })
    }

    pub fn node(&self) -> &GoalNode {
        &self.node
    }

    pub fn status(&self) -> GoalStatus {
        self.status
    }

    /// Attempts started so far, for a REPEAT node.
    pub fn attempts(&self) -> Option<u32> {
        match self.node {
            GoalNode::Repeat { attempts, .. } => Some(attempts),
            _ => None,
        }
    }

    pub fn children(&self) -> &[GoalStructure] {
        match &self.node {
            GoalNode::Primitive(_) => &[],
            GoalNode::Seq(c) | GoalNode::FirstOf(c) => c,
            GoalNode::Repeat { child, .. } => std::slice::from_ref(child.as_ref()),
        }
    }

    /// Propagates leaf statuses upwards and returns the root status.
    /// Restarts failed REPEAT children that still have retries left.
    pub fn evaluate(&mut self) -> GoalStatus {
        if self.status.is_terminal() {
            return self.status;
        }
        let status = match &mut self.node {
            GoalNode::Primitive(g) => g.status,
            GoalNode::Seq(children) => {
                let mut status = GoalStatus::Success;
                for (i, c) in children.iter_mut().enumerate() {
                    match c.evaluate() {
                        GoalStatus::Success => continue,
                        GoalStatus::Fail => status = GoalStatus::Fail,
                        GoalStatus::Pending if i == 0 => status = GoalStatus::Pending,
                        _ => status = GoalStatus::InProgress,
                    }
                    break;
                }
                status
            }
            GoalNode::FirstOf(children) => {
                let mut status = GoalStatus::Fail;
                for (i, c) in children.iter_mut().enumerate() {
                    match c.evaluate() {
                        GoalStatus::Fail => continue,
                        GoalStatus::Success => status = GoalStatus::Success,
                        GoalStatus::Pending if i == 0 => status = GoalStatus::Pending,
                        _ => status = GoalStatus::InProgress,
                    }
                    break;
                }
                status
            }
            GoalNode::Repeat { child, max_retries, attempts } => match child.evaluate() {
                GoalStatus::Fail if *attempts <= *max_retries => {
                    child.reset();
                    *attempts += 1;
                    GoalStatus::InProgress
                }
                other => other,
            },
        };
        self.status = status;
        status
    }

    fn reset(&mut self) {
        self.status = GoalStatus::Pending;
        match &mut self.node {
            GoalNode::Primitive(g) => g.reset(),
            GoalNode::Seq(children) | GoalNode::FirstOf(children) => children.iter_mut().for_each(Self::reset),
            GoalNode::Repeat { child, attempts, .. } => {
                *attempts = 1;
                child.reset();
            }
        }
    }

    /// Child-index path to the leftmost primitive goal that should be worked
    /// on next, following SEQ/FIRSTof/REPEAT semantics.
    pub fn current_path(&self) -> Option<Vec<usize>> {
        if self.status.is_terminal() {
            return None;
        }
        let (index, child) = match &self.node {
            GoalNode::Primitive(_) => return Some(Vec::new()),
            GoalNode::Seq(children) => children.iter().enumerate().find(|(_, c)| c.status != GoalStatus::Success)?,
            GoalNode::FirstOf(children) => children.iter().enumerate().find(|(_, c)| c.status != GoalStatus::Fail)?,
            GoalNode::Repeat { child, .. } => (0, child.as_ref()),
        };
        let mut path = child.current_path()?;
        path.insert(0, index);
        Some(path)
    }

    pub fn leaf(&self, path: &[usize]) -> Option<&PrimitiveGoal> {
        match (&self.node, path.split_first()) {
            (GoalNode::Primitive(g), None) => Some(g),
            (_, Some((&i, rest))) => self.children().get(i)?.leaf(rest),
            _ => None,
        }
    }

    pub fn leaf_mut(&mut self, path: &[usize]) -> Option<&mut PrimitiveGoal> {
        match (&mut self.node, path.split_first()) {
            (GoalNode::Primitive(g), None) => Some(g),
            (GoalNode::Seq(c) | GoalNode::FirstOf(c), Some((&i, rest))) => c.get_mut(i)?.leaf_mut(rest),
            (GoalNode::Repeat { child, .. }, Some((0, rest))) => child.leaf_mut(rest),
            _ => None,
        }
    }

    /// Evaluates the tree and returns its status with the current primitive goal.
    pub fn evaluate_goal(&mut self) -> (GoalStatus, Option<&PrimitiveGoal>) {
        let status = self.evaluate();
        match self.current_path() {
            Some(path) => (status, self.leaf(&path)),
            None => (status, None),
        }
    }

    pub fn leaves(&self) -> Vec<&PrimitiveGoal> {
        match &self.node {
            GoalNode::Primitive(g) => vec![g],
            _ => self.children().iter().flat_map(GoalStructure::leaves).collect(),
        }
    }

    /// Number of direct children that have succeeded.
    pub fn succeeded_children(&self) -> usize {
        self.children().iter().filter(|c| c.status == GoalStatus::Success).count()
    }
}
