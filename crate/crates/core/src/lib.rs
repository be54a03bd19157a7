//! Agent-based automated game testing.
//!
//! BDI test agents ([`agent`]) drive games under test through the
//! [`env::Environment`] interface, navigating with on-the-fly navigation
//! graphs ([`nav`]). On top of that sit reusable playtesting goals
//! ([`playtest`]), EFSM model-based test generation and execution ([`mbt`])
//! and a scriptless exploratory tester ([`explorer`]). Two built-in games
//! ([`games`]) serve as systems under test.

pub mod agent;
pub mod cli;
pub mod env;
pub mod explorer;
pub mod games;
pub mod mbt;
pub mod nav;
pub mod playtest;
pub mod world;
