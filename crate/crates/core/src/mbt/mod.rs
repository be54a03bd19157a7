//! Model-based testing over extended finite state machines: search-based
//! generation of abstract test cases, their translation into agent goals and
//! execution on ButtonMaze with a door-vector conformance check.

pub mod efsm;
pub mod execute;
pub mod fixtures;
pub mod search;

pub use efsm::{
    simulate, Efsm, EfsmData, EfsmError, EfsmState, Simulation, TestCase, Transition, TransitionId, TransitionKind,
};
pub use execute::{check_level, execute_suite, translate, ExecOptions, ExecutionReport, MbtError, TestResult};
pub use search::{coverage, generate, objectives, Budget, SearchConfig, SearchError, Strategy, TestSuite};
