//! Command-line entry point.
//!
//! Every subcommand writes a human summary, or with `--json` a single JSON
//! document, to the given writer. Exit codes: 0 success, 1 test failures or
//! oracle violations, 2 flag or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::explorer::{run_exploratory, ExplorerConfig};
use crate::games::{generate_level, ButtonMaze, DungeonConfig, LevelParams, MiniDungeon, Mutant};
use crate::mbt::{check_level, execute_suite, generate, Budget, Efsm, EfsmData, ExecOptions, SearchConfig, Strategy, TestSuite};
use crate::playtest::{oracle_soak, run_playtest, PlaytestConfig, SoakConfig};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "gameagent", version, about = "Agent-based testing of turn-based games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Print one JSON document instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct DungeonArgs {
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    #[arg(long, default_value_t = 4)]
    pub monsters: usize,
    #[arg(long, default_value_t = 3)]
    pub scrolls: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub players: u8,
    /// Seeded fault to switch on; repeatable.
    #[arg(long = "mutant")]
    pub mutants: Vec<Mutant>,
}

impl DungeonArgs {
    fn config(&self, seed: u64) -> DungeonConfig {
        DungeonConfig {
            level_count: self.levels,
            grid_size: self.grid,
            monsters_per_level: self.monsters,
            scrolls_per_level: self.scrolls,
            player_count: self.players as usize,
            seed,
            ..DungeonConfig::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct LevelArgs {
    /// Level CSV; generated from the other flags when absent.
    #[arg(long)]
    pub level: Option<PathBuf>,
    /// EFSM JSON matching `--level`; required with it.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Generate an L1-sized level.
    #[arg(long)]
    pub l1: bool,
    #[arg(long, default_value_t = 4)]
    pub rooms: usize,
    #[arg(long, default_value_t = 4)]
    pub buttons: usize,
    #[arg(long, default_value_t = 3)]
    pub doors: usize,
    /// Seed of the generated level; defaults to `--seed`.
    #[arg(long)]
    pub level_seed: Option<u64>,
}

impl LevelArgs {
    fn params(&self, seed: u64) -> LevelParams {
        let seed = self.level_seed.unwrap_or(seed);
        if self.l1 {
            LevelParams::l1(seed)
        } else {
            LevelParams { rooms: self.rooms, buttons: self.buttons, doors: self.doors, seed, ..LevelParams::default() }
        }
    }

    /// The level CSV and its model, loaded or generated.
    fn load(&self, seed: u64) -> Result<(String, Efsm), CliError> {
        match (&self.level, &self.model) {
            (Some(level), Some(model)) => {
                let csv = read(level)?;
                let data: EfsmData = serde_json::from_str(&read(model)?)
                    .map_err(|e| CliError::Input(format!("{}: {e}", model.display())))?;
                let efsm = Efsm::new(data).map_err(|e| CliError::Input(format!("{}: {e}", model.display())))?;
                Ok((csv, efsm))
            }
            (None, None) => {
                let g = generate_level(&self.params(seed)).map_err(|e| CliError::Input(e.to_string()))?;
                Ok((g.csv, g.efsm))
            }
            _ => Err(CliError::Input("--level and --model must be given together".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Run the two-shrine MiniDungeon playtest and check the trace oracles.
    Playtest {
        #[command(flatten)]
        dungeon: DungeonArgs,
        #[arg(long, default_value_t = 4000)]
        max_cycles: u64,
    },
    /// Generate a ButtonMaze level and its EFSM.
    Genlevel {
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Search for a test suite covering the EFSM transitions.
    MbtGen {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, default_value = "mosa")]
        strategy: Strategy,
        /// Fitness evaluations.
        #[arg(long, default_value_t = 50_000)]
        budget: u64,
    },
    /// Execute a suite on the game and compare door states with the model.
    MbtRun {
        #[command(flatten)]
        level: LevelArgs,
        /// Suite JSON from `mbt-gen`; generated with `--strategy` when absent.
        #[arg(long)]
        suite: Option<PathBuf>,
        #[arg(long, default_value = "mosa")]
        strategy: Strategy,
        /// Fitness evaluations when the suite is generated.
        #[arg(long, default_value_t = 50_000)]
        budget: u64,
        /// Cycle budget of every translated goal.
        #[arg(long, default_value_t = ExecOptions::default().goal_budget)]
        goal_budget: u32,
    },
    /// Scriptless exploratory session.
    Explore {
        #[arg(long, default_value = "maze")]
        game: GameKind,
        /// ButtonMaze CSV; an all-open level with `--buttons` buttons when absent.
        #[arg(long)]
        level: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        buttons: usize,
        /// Explorer actions.
        #[arg(long, default_value_t = 300)]
        budget: usize,
        #[command(flatten)]
        dungeon: DungeonArgs,
    },
    /// Long random MiniDungeon run with the implanted assertions on.
    OracleSoak {
        #[command(flatten)]
        dungeon: DungeonArgs,
        #[arg(long, default_value_t = 2000)]
        turns: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GameKind {
    Maze,
    Dungeon,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

/// What a subcommand produced: the JSON document, a human summary and whether it passed.
struct Outcome {
    json: serde_json::Value,
    summary: String,
    passed: bool,
}

fn playtest(c: &Common, dungeon: &DungeonArgs, max_cycles: u64) -> Result<Outcome, CliError> {
    let config = PlaytestConfig { max_cycles, mutants: dungeon.mutants.clone(), ..PlaytestConfig::new(dungeon.config(c.seed)) };
    let (report, _) = run_playtest(&config).map_err(|e| CliError::Input(e.to_string()))?;
    let mut summary = format!(
        "seed {} {} after {} cycles ({} turns), score {}, {} violation(s)",
        report.seed,
        report.status,
        report.cycles,
        report.turns,
        report.score,
        report.violations.len()
    );
    for v in &report.violations {
        summary.push_str(&format!("\n  {} at step {}: {}", v.oracle, v.step_index, v.detail));
    }
    Ok(Outcome { passed: report.passed(), json: serde_json::to_value(&report).expect("serializable"), summary })
}

fn genlevel(c: &Common, level: &LevelArgs) -> Result<Outcome, CliError> {
    let params = level.params(c.seed);
    let g = generate_level(&params).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(stem) = &c.out {
        write_file(&stem.with_extension("csv"), &g.csv)?;
        write_file(&stem.with_extension("efsm.json"), &pretty(g.efsm.data()))?;
    }
    let json = json!({
        "seed": params.seed,
        "states": g.efsm.state_count(),
        "transitions": g.efsm.transition_count(),
        "variables": g.efsm.variables().len(),
        "csv": g.csv,
        "efsm": g.efsm.data(),
    });
    let summary = format!(
        "level seed {}: {} states, {} transitions, {} variables\n{}",
        params.seed,
        g.efsm.state_count(),
        g.efsm.transition_count(),
        g.efsm.variables().len(),
        g.csv.trim_end()
    );
    Ok(Outcome { json, summary, passed: true })
}

fn search(efsm: &Efsm, strategy: Strategy, budget: u64, seed: u64) -> Result<TestSuite, CliError> {
    generate(efsm, &SearchConfig::new(strategy, Budget::Evaluations(budget), seed)).map_err(|e| CliError::Input(e.to_string()))
}

fn mbt_gen(c: &Common, level: &LevelArgs, strategy: Strategy, budget: u64) -> Result<Outcome, CliError> {
    let (_, efsm) = level.load(c.seed)?;
    let suite = search(&efsm, strategy, budget, c.seed)?;
    if let Some(path) = &c.out {
        write_file(path, &pretty(&suite))?;
    }
    let summary = format!(
        "{}: {} tests, coverage {:.3} of {} transitions after {} evaluations",
        suite.strategy,
        suite.tests.len(),
        suite.coverage,
        efsm.transition_count(),
        suite.evaluations
    );
    Ok(Outcome { json: serde_json::to_value(&suite).expect("serializable"), summary, passed: true })
}

fn mbt_run(
    c: &Common,
    level: &LevelArgs,
    suite: Option<&Path>,
    strategy: Strategy,
    budget: u64,
    goal_budget: u32,
) -> Result<Outcome, CliError> {
    let (csv, efsm) = level.load(c.seed)?;
    let maze = ButtonMaze::load_csv(&csv).map_err(|e| CliError::Input(e.to_string()))?;
    check_level(&efsm, &maze).map_err(|e| CliError::Input(e.to_string()))?;
    let suite = match suite {
        Some(p) => serde_json::from_str::<TestSuite>(&read(p)?).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        None => search(&efsm, strategy, budget, c.seed)?,
    };
    let opts = ExecOptions { goal_budget, seed: c.seed };
    let report = execute_suite(|| maze.clone(), &efsm, &suite.tests, opts).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(path) = &c.out {
        write_file(path, &pretty(&report))?;
    }
    let summary = format!(
        "time {:.2}s  tests {}  fails {}  cycles {}  conformance violations {}",
        report.time, report.n_tests, report.n_fails, report.total_cycles, report.conformance_violations
    );
    let passed = report.n_fails == 0 && report.conformance_violations == 0;
    Ok(Outcome { json: serde_json::to_value(&report).expect("serializable"), summary, passed })
}

fn explore(
    c: &Common,
    game: GameKind,
    level: Option<&Path>,
    buttons: usize,
    budget: usize,
    dungeon: &DungeonArgs,
) -> Result<Outcome, CliError> {
    let bad = |e: String| CliError::Input(e);
    let config = ExplorerConfig::new(budget, c.seed);
    let report = match game {
        GameKind::Maze => {
            let csv = match level {
                Some(p) => read(p)?,
                None => generate_level(&LevelParams::open(buttons, c.seed)).map_err(|e| bad(e.to_string()))?.csv,
            };
            let mut maze = ButtonMaze::load_csv(&csv).map_err(|e| bad(e.to_string()))?;
            for &m in &dungeon.mutants {
                maze = maze.with_mutant(m);
            }
            run_exploratory(|| maze.clone(), &config, &[])
        }
        GameKind::Dungeon => {
            let dc = dungeon.config(c.seed);
            let mut proto = MiniDungeon::new(dc).map_err(|e| bad(e.to_string()))?.with_debug(true);
            for &m in &dungeon.mutants {
                proto = proto.with_mutant(m);
            }
            run_exploratory(|| proto.clone(), &config.with_dungeon_keys(), &[])
        }
    }
    .map_err(|e| bad(e.to_string()))?;
    if let Some(path) = &c.out {
        write_file(path, &pretty(&report))?;
    }
    let mut summary = format!(
        "{} actions ({} compound), {} of {} interactables tried, {} states, {} restarts, {} violation(s)",
        report.actions,
        report.compound_actions,
        report.unique_interactions,
        report.interactables_seen,
        report.visited_states,
        report.restarts,
        report.violations.len()
    );
    for v in &report.violations {
        summary.push_str(&format!("\n  {} after action {}: {}", v.oracle, v.action_index, v.detail));
    }
    Ok(Outcome { passed: report.violations.is_empty(), json: serde_json::to_value(&report).expect("serializable"), summary })
}

fn soak(c: &Common, dungeon: &DungeonArgs, turns: u64) -> Result<Outcome, CliError> {
    let config = SoakConfig { dungeon: dungeon.config(c.seed), turns, mutants: dungeon.mutants.clone() };
    let report = oracle_soak(&config).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(path) = &c.out {
        write_file(path, &pretty(&report))?;
    }
    let mut summary = format!("{} turns over {} game(s), {} violation(s)", report.turns, report.games, report.violations.len());
    if let Some(t) = report.first_violation_turn {
        summary.push_str(&format!(", first at turn {t}"));
    }
    for v in report.violations.iter().take(10) {
        summary.push_str(&format!("\n  turn {} game {}: {}", v.turn, v.game, v.message));
    }
    Ok(Outcome { passed: report.violations.is_empty(), json: serde_json::to_value(&report).expect("serializable"), summary })
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let c = &cli.common;
    match &cli.command {
        Cmd::Playtest { dungeon, max_cycles } => playtest(c, dungeon, *max_cycles),
        Cmd::Genlevel { level } => genlevel(c, level),
        Cmd::MbtGen { level, strategy, budget } => mbt_gen(c, level, *strategy, *budget),
        Cmd::MbtRun { level, suite, strategy, budget, goal_budget } => {
            mbt_run(c, level, suite.as_deref(), *strategy, *budget, *goal_budget)
        }
        Cmd::Explore { game, level, buttons, budget, dungeon } => {
            explore(c, *game, level.as_deref(), *buttons, *budget, dungeon)
        }
        Cmd::OracleSoak { dungeon, turns } => soak(c, dungeon, *turns),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let text = if cli.common.json { pretty(&o.json) } else { o.summary };
            let _ = writeln!(out, "{text}");
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("gameagent").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn flag_errors_exit_two() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["playtest", "--players", "3"]).0, 2);
        assert_eq!(call(&["mbt-gen", "--strategy", "hillclimb"]).0, 2);
        assert_eq!(call(&["playtest", "--mutant", "nope"]).0, 2);
        assert_eq!(call(&["genlevel", "--rooms", "0"]).0, 2);
        assert_eq!(call(&["mbt-run", "--level", "x.csv"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn genlevel_json_reports_sizes() {
        let (code, text) = call(&["genlevel", "--json", "--seed", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["variables"], 3);
        assert!(v["csv"].as_str().unwrap().contains("b0"));
    }

    #[test]
    fn strategy_names_parse() {
        for s in ["random", "mulambda", "mu+lambda", "mosa"] {
            let (code, _) = call(&["mbt-gen", "--strategy", s, "--budget", "200", "--json"]);
            assert_eq!(code, 0, "{s}");
        }
    }

    #[test]
    fn soak_mutant_fails() {
        assert_eq!(call(&["oracle-soak", "--turns", "300", "--seed", "1"]).0, 0);
        let (code, text) = call(&["oracle-soak", "--turns", "2000", "--seed", "1", "--mutant", "buggyMonsterMove", "--json"]);
        assert_eq!(code, 1);
        assert!(text.contains("firstViolationTurn"));
    }

    #[test]
    fn files_round_trip_through_mbt_run() {
        let dir = std::env::temp_dir().join(format!("gameagent-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let stem = dir.join("lvl");
        let suite = dir.join("suite.json");
        let s = |p: &Path| p.to_str().unwrap().to_string();
        assert_eq!(call(&["genlevel", "--seed", "5", "--out", &s(&stem)]).0, 0);
        let (level, model) = (s(&stem.with_extension("csv")), s(&stem.with_extension("efsm.json")));
        assert_eq!(call(&["mbt-gen", "--level", &level, "--model", &model, "--budget", "2000", "--out", &s(&suite)]).0, 0);
        let (code, text) = call(&["mbt-run", "--level", &level, "--model", &model, "--suite", &s(&suite), "--json"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["conformanceViolations"], 0);
        assert_eq!(code, if v["nFails"] == 0 { 0 } else { 1 });
        fs::remove_dir_all(&dir).unwrap();
    }
}
