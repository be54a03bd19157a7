//! Search-based test generation over an EFSM.
//!
//! Individuals are sequences of choice genes. Decoding walks the model from
//! the initial configuration and, at each step, takes the enabled outgoing
//! transition selected by `gene % enabled.len()`, stopping early when none is
//! enabled. Decoded tests are therefore always feasible.
//!
//! All strategies share one archive holding, per transition, the shortest
//! prefix of the first evaluated test that fired it. The emitted suite is the
//! archive with prefix-subsumed tests removed.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::efsm::{simulate, Doors, Efsm, EfsmError, TestCase, TransitionId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Strategy {
    Random,
    MuPlusLambda,
    Mosa,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Random, Strategy::MuPlusLambda, Strategy::Mosa];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Random => "random",
            Strategy::MuPlusLambda => "muPlusLambda",
            Strategy::Mosa => "mosa",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "random" => Ok(Strategy::Random),
            "mupluslambda" | "mu+lambda" | "mulambda" => Ok(Strategy::MuPlusLambda),
            "mosa" => Ok(Strategy::Mosa),
            _ => Err(format!("unknown strategy '{s}' (expected random, mu+lambda or mosa)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    /// Number of decoded-and-scored individuals.
    Evaluations(u64),
    WallClock(Duration),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub budget: Budget,
    pub seed: u64,
    /// Longest genotype; defaults to `min(2 * transitions, 200)`.
    pub max_length: Option<usize>,
    /// MOSA population size and (μ+λ) parent count μ.
    pub population: usize,
    /// (μ+λ) offspring count λ.
    pub offspring: usize,
    pub crossover_rate: f64,
}

impl SearchConfig {
    pub fn new(strategy: Strategy, budget: Budget, seed: u64) -> Self {
        SearchConfig { strategy, budget, seed, max_length: None, population: 20, offspring: 20, crossover_rate: 0.75 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestSuite {
    pub strategy: Strategy,
    pub seed: u64,
    pub evaluations: u64,
    pub tests: Vec<TestCase>,
    /// Fraction of model transitions fired by the feasible prefixes of `tests`.
    pub coverage: f64,
}

/// Fraction of transitions fired by the feasible prefixes of `tests`.
pub fn coverage(efsm: &Efsm, tests: &[TestCase]) -> Result<f64, EfsmError> {
    let n = efsm.transition_count();
    if n == 0 {
        return Ok(1.0);
    }
    let mut fired = vec![false; n];
    for test in tests {
        let sim = simulate(efsm, test)?;
        for &t in &test[..sim.prefix_length] {
            fired[t] = true;
        }
    }
    Ok(fired.iter().filter(|&&f| f).count() as f64 / n as f64)
}

/// States visited and door vectors held along a feasible test.
#[derive(Clone, Debug, Default)]
struct Walk {
    test: TestCase,
    states: Vec<usize>,
    doors: Vec<Doors>,
}

fn decode(efsm: &Efsm, genes: &[u32], scratch: &mut Vec<TransitionId>) -> Walk {
    let mut state = efsm.initial_state();
    let mut doors: Doors = 0;
    let mut walk = Walk { test: Vec::with_capacity(genes.len()), states: vec![state], doors: vec![doors] };
    for &g in genes {
        scratch.clear();
        scratch.extend(efsm.outgoing(state).iter().copied().filter(|&t| efsm.enabled(t, doors)));
        if scratch.is_empty() {
            break;
        }
        let t = scratch[g as usize % scratch.len()];
        walk.test.push(t);
        doors = efsm.apply(t, doors);
        state = efsm.dst(t);
        walk.states.push(state);
        walk.doors.push(doors);
    }
    walk
}

fn walk_of(efsm: &Efsm, test: &[TransitionId]) -> Result<Walk, EfsmError> {
    let sim = simulate(efsm, test)?;
    let test = &test[..sim.prefix_length];
    let mut state = efsm.initial_state();
    let mut doors: Doors = 0;
    let mut walk = Walk { test: test.to_vec(), states: vec![state], doors: vec![doors] };
    for &t in test {
        doors = efsm.apply(t, doors);
        state = efsm.dst(t);
        walk.states.push(state);
        walk.doors.push(doors);
    }
    Ok(walk)
}

fn nu(x: f64) -> f64 {
    x / (x + 1.0)
}

/// MOSA objective per transition (lower is better, 0 when fired) for the
/// feasible prefix of `test`.
///
/// For an unfired transition `t` this is `d + r + ν(b)` where `d` is the
/// guard-free distance from the closest visited state to `src(t)`, `r` is 1
/// if `src(t)` was visited and 0 otherwise, and `b` is 0 when the guard door
/// was open (at some visit of `src(t)`, or else at the closest visit) and 1
/// when it was closed. Sources that cannot be reached score
/// `states + 2`.
pub fn objectives(efsm: &Efsm, test: &[TransitionId]) -> Result<Vec<f64>, EfsmError> {
    let walk = walk_of(efsm, test)?;
    let mut scorer = Scorer::new(efsm);
    Ok(scorer.score(efsm, &walk))
}

struct Scorer {
    dist: Vec<usize>,
    label: Vec<usize>,
    queue: VecDeque<usize>,
    fired: Vec<bool>,
    open_seen: Vec<bool>,
}

impl Scorer {
    fn new(efsm: &Efsm) -> Self {
        Scorer {
            dist: vec![usize::MAX; efsm.state_count()],
            label: vec![0; efsm.state_count()],
            queue: VecDeque::new(),
            fired: vec![false; efsm.transition_count()],
            open_seen: vec![false; efsm.transition_count()],
        }
    }

    fn score(&mut self, efsm: &Efsm, walk: &Walk) -> Vec<f64> {
        self.dist.fill(usize::MAX);
        self.fired.fill(false);
        self.open_seen.fill(false);
        self.queue.clear();
        for &t in &walk.test {
            self.fired[t] = true;
        }
        // Latest visit wins the label of a state.
        for (i, &s) in walk.states.iter().enumerate().rev() {
            if self.dist[s] == usize::MAX {
                self.dist[s] = 0;
                self.label[s] = i;
                self.queue.push_back(s);
            }
            for &t in efsm.outgoing(s) {
                if let Some(g) = efsm.guard_var(t) {
                    if walk.doors[i] & (1 << g) != 0 {
                        self.open_seen[t] = true;
                    }
                }
            }
        }
        while let Some(s) = self.queue.pop_front() {
            for &t in efsm.outgoing(s) {
                let d = efsm.dst(t);
                if self.dist[d] == usize::MAX {
                    self.dist[d] = self.dist[s] + 1;
                    self.label[d] = self.label[s];
                    self.queue.push_back(d);
                }
            }
        }
        let unreachable = efsm.state_count() as f64 + 2.0;
        (0..efsm.transition_count())
            .map(|t| {
                if self.fired[t] {
                    return 0.0;
                }
                let s = efsm.src(t);
                let d = self.dist[s];
                if d == usize::MAX {
                    return unreachable;
                }
                let reached = d == 0;
                let closed = match efsm.guard_var(t) {
                    None => 0.0,
                    Some(_) if reached => f64::from(u8::from(!self.open_seen[t])),
                    Some(g) => f64::from(u8::from(walk.doors[self.label[s]] & (1 << g) == 0)),
                };
                d as f64 + f64::from(u8::from(reached)) + nu(closed)
            })
            .collect()
    }
}

struct Archive {
    tests: Vec<Option<TestCase>>,
    covered: usize,
}

impl Archive {
    fn new(n: usize) -> Self {
        Archive { tests: vec![None; n], covered: 0 }
    }

    /// Stores first-covering prefixes; returns the number of newly covered transitions.
    fn record(&mut self, test: &[TransitionId]) -> usize {
        let mut new = 0;
        for (i, &t) in test.iter().enumerate() {
            if self.tests[t].is_none() {
                self.tests[t] = Some(test[..=i].to_vec());
                new += 1;
            }
        }
        self.covered += new;
        new
    }

    fn is_covered(&self, t: TransitionId) -> bool {
        self.tests[t].is_some()
    }

    fn complete(&self) -> bool {
        self.covered == self.tests.len()
    }

    /// Archived tests without those that are a prefix of another, in lexicographic order.
    fn suite(&self) -> Vec<TestCase> {
        let mut all: Vec<&TestCase> = self.tests.iter().flatten().collect();
        all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut kept: Vec<&TestCase> = Vec::new();
        for t in all {
            if !kept.iter().any(|k| k.starts_with(t)) {
                kept.push(t);
            }
        }
        let mut suite: Vec<TestCase> = kept.into_iter().cloned().collect();
        suite.sort();
        suite
    }
}

struct Engine<'a> {
    efsm: &'a Efsm,
    rng: ChaCha8Rng,
    archive: Archive,
    evaluations: u64,
    budget: Budget,
    start: Instant,
    max_len: usize,
    scratch: Vec<TransitionId>,
}

impl<'a> Engine<'a> {
    fn has_budget(&self) -> bool {
        !self.archive.complete()
            && match self.budget {
                Budget::Evaluations(n) => self.evaluations < n,
                Budget::WallClock(d) => self.start.elapsed() < d,
            }
    }

    fn evaluate(&mut self, genes: &[u32]) -> (Walk, usize) {
        self.evaluations += 1;
        let walk = decode(self.efsm, genes, &mut self.scratch);
        let new = self.archive.record(&walk.test);
        (walk, new)
    }

    fn random_genes(&mut self) -> Vec<u32> {
        let len = self.rng.gen_range(1..=self.max_len);
        (0..len).map(|_| self.rng.gen()).collect()
    }

    /// Replaces each gene with probability 1/len, then inserts and deletes
    /// one gene with probability 1/3 each; at least one gene changes.
    fn mutate(&mut self, genes: &[u32]) -> Vec<u32> {
        let mut out = genes.to_vec();
        let p = 1.0 / out.len().max(1) as f64;
        let mut changed = false;
        for g in out.iter_mut() {
            if self.rng.gen_bool(p) {
                *g = self.rng.gen();
                changed = true;
            }
        }
        if out.len() < self.max_len && self.rng.gen_bool(1.0 / 3.0) {
            let at = self.rng.gen_range(0..=out.len());
            out.insert(at, self.rng.gen());
            changed = true;
        }
        if out.len() > 1 && self.rng.gen_bool(1.0 / 3.0) {
            let at = self.rng.gen_range(0..out.len());
            out.remove(at);
            changed = true;
        }
        if !changed {
            if out.is_empty() {
                out.push(self.rng.gen());
            } else {
                let at = self.rng.gen_range(0..out.len());
                out[at] = self.rng.gen();
            }
        }
        out
    }

    fn crossover(&mut self, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let i = self.rng.gen_range(0..=a.len());
        let j = self.rng.gen_range(0..=b.len());
        let mut c1: Vec<u32> = a[..i].iter().chain(&b[j..]).copied().collect();
        let mut c2: Vec<u32> = b[..j].iter().chain(&a[i..]).copied().collect();
        for c in [&mut c1, &mut c2] {
            c.truncate(self.max_len);
            if c.is_empty() {
                c.push(self.rng.gen());
            }
        }
        (c1, c2)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("the search budget must allow at least one evaluation")]
    EmptyBudget,
    #[error("{0}")]
    BadParameter(String),
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        match self.budget {
            Budget::Evaluations(0) => return Err(SearchError::EmptyBudget),
            Budget::WallClock(d) if d.is_zero() => return Err(SearchError::EmptyBudget),
            _ => {}
        }
        if self.max_length == Some(0) {
            return Err(SearchError::BadParameter("maximum test length must be at least 1".into()));
        }
        let (min_pop, what) = match self.strategy {
            Strategy::Mosa => (2, "MOSA population"),
            _ => (1, "mu"),
        };
        if self.population < min_pop {
            return Err(SearchError::BadParameter(format!("{what} must be at least {min_pop}")));
        }
        if self.offspring == 0 {
            return Err(SearchError::BadParameter("lambda must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(SearchError::BadParameter("crossover rate must be within [0, 1]".into()));
        }
        Ok(())
    }
}

/// Runs the configured strategy until the budget is spent or every
/// transition is covered. Only the model is simulated; no game is touched.
pub fn generate(efsm: &Efsm, config: &SearchConfig) -> Result<TestSuite, SearchError> {
    config.validate()?;
    let n = efsm.transition_count();
    let max_len = config.max_length.unwrap_or((2 * n).min(200)).max(1);
    let mut engine = Engine {
        efsm,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        archive: Archive::new(n),
        evaluations: 0,
        budget: config.budget,
        start: Instant::now(),
        max_len,
        scratch: Vec::new(),
    };
    match config.strategy {
        Strategy::Random => run_random(&mut engine),
        Strategy::MuPlusLambda => run_mu_plus_lambda(&mut engine, config.population, config.offspring),
        Strategy::Mosa => run_mosa(&mut engine, config.population, config.crossover_rate),
    }
    let tests = engine.archive.suite();
    let coverage = if n == 0 { 1.0 } else { engine.archive.covered as f64 / n as f64 };
    Ok(TestSuite { strategy: config.strategy, seed: config.seed, evaluations: engine.evaluations, tests, coverage })
}

fn run_random(e: &mut Engine) {
    while e.has_budget() {
        let genes = e.random_genes();
        e.evaluate(&genes);
    }
}

/// Fitness is the number of transitions an individual newly covered when it
/// was evaluated; ties prefer shorter decoded tests.
fn run_mu_plus_lambda(e: &mut Engine, mu: usize, lambda: usize) {
    let mut pop: Vec<(Vec<u32>, usize, usize)> = Vec::with_capacity(mu + lambda);
    while pop.len() < mu && e.has_budget() {
        let genes = e.random_genes();
        let (walk, new) = e.evaluate(&genes);
        pop.push((genes, new, walk.test.len()));
    }
    while e.has_budget() && !pop.is_empty() {
        for _ in 0..lambda {
            if !e.has_budget() {
                break;
            }
            let parent = pop[e.rng.gen_range(0..pop.len().min(mu))].0.clone();
            let child = e.mutate(&parent);
            let (walk, new) = e.evaluate(&child);
            pop.push((child, new, walk.test.len()));
        }
        pop.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
        pop.truncate(mu);
    }
}

struct Individual {
    genes: Vec<u32>,
    len: usize,
    f: Vec<f64>,
    rank: usize,
    crowding: f64,
}

fn run_mosa(e: &mut Engine, size: usize, crossover_rate: f64) {
    let mut scorer = Scorer::new(e.efsm);
    let mut pop: Vec<Individual> = Vec::with_capacity(2 * size);
    let make = |e: &mut Engine, scorer: &mut Scorer, genes: Vec<u32>| {
        let (walk, _) = e.evaluate(&genes);
        let f = scorer.score(e.efsm, &walk);
        Individual { genes, len: walk.test.len(), f, rank: 0, crowding: 0.0 }
    };
    while pop.len() < size && e.has_budget() {
        let genes = e.random_genes();
        pop.push(make(e, &mut scorer, genes));
    }
    if pop.is_empty() {
        return;
    }
    pop = select(e, pop, size);
    while e.has_budget() {
        let mut offspring = Vec::with_capacity(size);
        while offspring.len() < size && e.has_budget() {
            let a = tournament(e, &pop);
            let b = tournament(e, &pop);
            let (c1, c2) = if e.rng.gen_bool(crossover_rate) {
                e.crossover(&pop[a].genes, &pop[b].genes)
            } else {
                (pop[a].genes.clone(), pop[b].genes.clone())
            };
            for c in [c1, c2] {
                if offspring.len() < size && e.has_budget() {
                    let genes = e.mutate(&c);
                    offspring.push(make(e, &mut scorer, genes));
                }
            }
        }
        pop.extend(offspring);
        pop = select(e, pop, size);
    }
}

fn tournament(e: &mut Engine, pop: &[Individual]) -> usize {
    let a = e.rng.gen_range(0..pop.len());
    let b = e.rng.gen_range(0..pop.len());
    let better = |x: &Individual, y: &Individual| x.rank < y.rank || (x.rank == y.rank && x.crowding > y.crowding);
    if better(&pop[b], &pop[a]) {
        b
    } else {
        a
    }
}

fn dominates(a: &[f64], b: &[f64], objectives: &[usize]) -> bool {
    let mut strictly = false;
    for &u in objectives {
        if a[u] > b[u] {
            return false;
        }
        if a[u] < b[u] {
            strictly = true;
        }
    }
    strictly
}

fn assign_crowding(pop: &mut [Individual], front: &[usize], objectives: &[usize]) {
    for &i in front {
        pop[i].crowding = 0.0;
    }
    if front.len() <= 2 {
        for &i in front {
            pop[i].crowding = f64::INFINITY;
        }
        return;
    }
    let mut order = front.to_vec();
    for &u in objectives {
        let (lo, hi) = front
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| (lo.min(pop[i].f[u]), hi.max(pop[i].f[u])));
        if hi <= lo {
            continue;
        }
        order.sort_by(|&a, &b| pop[a].f[u].total_cmp(&pop[b].f[u]).then(a.cmp(&b)));
        let (first, last) = (order[0], order[order.len() - 1]);
        pop[first].crowding = f64::INFINITY;
        pop[last].crowding = f64::INFINITY;
        for w in order.windows(3) {
            pop[w[1]].crowding += (pop[w[2]].f[u] - pop[w[0]].f[u]) / (hi - lo);
        }
    }
}

/// Preference sorting: the best individual per uncovered transition forms
/// front 0, the rest is ranked by non-dominated sorting on the uncovered
/// objectives; fronts fill the next population, the last one by crowding.
fn select(e: &Engine, mut pop: Vec<Individual>, size: usize) -> Vec<Individual> {
    let uncovered: Vec<usize> = (0..e.efsm.transition_count()).filter(|&t| !e.archive.is_covered(t)).collect();
    if uncovered.is_empty() {
        pop.truncate(size);
        return pop;
    }
    let mut best: BTreeSet<usize> = BTreeSet::new();
    for &u in &uncovered {
        let i = (0..pop.len())
            .min_by(|&a, &b| pop[a].f[u].total_cmp(&pop[b].f[u]).then(pop[a].len.cmp(&pop[b].len)).then(a.cmp(&b)))
            .expect("population is not empty");
        best.insert(i);
    }
    let mut fronts: Vec<Vec<usize>> = vec![best.iter().copied().collect()];
    let mut rest: Vec<usize> = (0..pop.len()).filter(|i| !best.contains(i)).collect();
    let mut placed = fronts[0].len();
    while placed < size && !rest.is_empty() {
        let front: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|&i| !rest.iter().any(|&j| j != i && dominates(&pop[j].f, &pop[i].f, &uncovered)))
            .collect();
        rest.retain(|i| !front.contains(i));
        placed += front.len();
        fronts.push(front);
    }
    let mut chosen = Vec::with_capacity(size);
    for (rank, front) in fronts.iter().enumerate() {
        for &i in front {
            pop[i].rank = rank;
        }
        assign_crowding(&mut pop, front, &uncovered);
        if chosen.len() + front.len() <= size {
            chosen.extend(front.iter().copied());
        } else {
            let mut sorted = front.clone();
            sorted.sort_by(|&a, &b| pop[b].crowding.total_cmp(&pop[a].crowding).then(a.cmp(&b)));
            chosen.extend(sorted.into_iter().take(size - chosen.len()));
        }
        if chosen.len() >= size {
            break;
        }
    }
    chosen.sort_unstable();
    let mut slots: Vec<Option<Individual>> = pop.into_iter().map(Some).collect();
    chosen.into_iter().map(|i| slots[i].take().expect("chosen once")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mbt::efsm::TransitionKind;
    use crate::mbt::fixtures::{single, tiny};

    fn find(efsm: &Efsm, src: &str, dst: &str, kind: TransitionKind) -> TransitionId {
        efsm.transitions().iter().position(|t| t.src == src && t.dst == dst && t.kind == kind).unwrap()
    }

    #[test]
    fn decoded_tests_are_feasible() {
        let e = tiny();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut scratch = Vec::new();
        for _ in 0..200 {
            let genes: Vec<u32> = (0..rng.gen_range(1..20)).map(|_| rng.gen()).collect();
            let walk = decode(&e, &genes, &mut scratch);
            assert!(simulate(&e, &walk.test).unwrap().feasible);
        }
    }

    #[test]
    fn objective_closed_door_next_to_source() {
        // Ends on d0a with d0 closed: the crossing d0a->d0b scores 0 + 1 + ν(1).
        let e = single();
        let go = find(&e, "b0", "d0a", TransitionKind::Travel);
        let f = objectives(&e, &[go]).unwrap();
        let cross = find(&e, "d0a", "d0b", TransitionKind::DoorCross);
        assert_eq!(f[cross], 1.5);
        assert_eq!(f[go], 0.0);
        // One step short of the source, door still closed: 1 + 0 + ν(1).
        assert_eq!(objectives(&e, &[]).unwrap()[cross], 1.5);
        // Door opened before reaching the source: 1 + 0 + 0, then 0 + 1 + 0.
        let toggle = find(&e, "b0", "b0", TransitionKind::Toggle);
        assert_eq!(objectives(&e, &[toggle]).unwrap()[cross], 1.0);
        assert_eq!(objectives(&e, &[toggle, go]).unwrap()[cross], 1.0);
    }

    #[test]
    fn archive_drops_prefix_subsumed_tests() {
        let mut a = Archive::new(4);
        a.record(&[0, 1]);
        a.record(&[0, 1, 2]);
        a.record(&[3]);
        assert_eq!(a.suite(), vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(a.covered, 4);
    }

    #[test]
    fn strategies_cover_tiny_fixture() {
        for s in Strategy::ALL {
            let suite = generate(&tiny(), &SearchConfig::new(s, Budget::Evaluations(1000), 1)).unwrap();
            assert_eq!(suite.coverage, 1.0, "{s}");
            assert_eq!(coverage(&tiny(), &suite.tests).unwrap(), 1.0, "{s}");
            assert!(suite.evaluations <= 1000);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let c = SearchConfig::new(Strategy::Mosa, Budget::Evaluations(300), 9);
        assert_eq!(generate(&tiny(), &c).unwrap(), generate(&tiny(), &c).unwrap());
    }

    #[test]
    fn empty_budget_is_rejected() {
        let c = SearchConfig::new(Strategy::Random, Budget::Evaluations(0), 1);
        assert_eq!(generate(&tiny(), &c), Err(SearchError::EmptyBudget));
        let c = SearchConfig { population: 1, ..SearchConfig::new(Strategy::Mosa, Budget::Evaluations(10), 1) };
        assert!(generate(&tiny(), &c).is_err());
    }

    #[test]
    fn empty_suite_covers_nothing() {
        assert_eq!(coverage(&tiny(), &[]).unwrap(), 0.0);
    }

    #[test]
    fn strategy_names_parse() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert_eq!("mu+lambda".parse::<Strategy>().unwrap(), Strategy::MuPlusLambda);
        assert!("hill".parse::<Strategy>().is_err());
    }
}
