use std::collections::{HashMap, HashSet};

use crate::world::{Pos, WorldModel};

use super::NavError;

pub type NodeId = usize;

/// Distance model of a graph, which also picks the A* heuristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// 4-connected grid with unit edge weights (Manhattan heuristic).
    UnitGrid,
    /// Arbitrary node positions, Euclidean edge weights (Euclidean heuristic).
    Euclidean,
}

/// Undirected weighted graph over walkable space.
///
/// Node ids are dense indices assigned in insertion order. Grid-backed graphs
/// also index nodes by cell.
#[derive(Clone, Debug)]
pub struct NavGraph {
    positions: Vec<[f64; 2]>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
    blocked: Vec<bool>,
    explored: Vec<bool>,
    cells: HashMap<Pos, NodeId>,
    cell_of: Vec<Option<Pos>>,
    /// Cells known to be non-walkable (on-the-fly graphs only).
    obstacles: HashSet<Pos>,
    /// Whether cells that are neither nodes nor obstacles are still unknown.
    open_world: bool,
    metric: Metric,
}

impl NavGraph {
    fn empty(metric: Metric, open_world: bool) -> Self {
        NavGraph {
            positions: Vec::new(),
            adjacency: Vec::new(),
            blocked: Vec::new(),
            explored: Vec::new(),
            cells: HashMap::new(),
            cell_of: Vec::new(),
            obstacles: HashSet::new(),
            open_world,
            metric,
        }
    }

    /// Empty grid graph that grows from observations, see
    /// [`NavGraph::add_observed_geometry`].
    pub fn incremental() -> Self {
        NavGraph::empty(Metric::UnitGrid, true)
    }

    /// One node per walkable cell (`walkable[y][x]`), unit edges between
    /// 4-adjacent walkable cells. Nodes are numbered in row-major order.
    pub fn from_grid(walkable: &[Vec<bool>]) -> Result<Self, NavError> {
        let width = walkable.first().map_or(0, Vec::len);
        if width == 0 {
            return Err(NavError::EmptyGrid);
        }
        if let Some(row) = walkable.iter().position(|r| r.len() != width) {
            return Err(NavError::RaggedGrid { row });
        }
        let mut g = NavGraph::empty(Metric::UnitGrid, false);
        for (y, row) in walkable.iter().enumerate() {
            for (x, &open) in row.iter().enumerate() {
                if open {
                    g.insert_cell(Pos::new(x as i32, y as i32));
                }
            }
        }
        Ok(g)
    }

    pub(super) fn euclidean() -> Self {
        NavGraph::empty(Metric::Euclidean, false)
    }

    pub(super) fn add_node(&mut self, position: [f64; 2]) -> NodeId {
        let id = self.positions.len();
        self.positions.push(position);
        self.adjacency.push(Vec::new());
        self.blocked.push(false);
        self.explored.push(false);
        self.cell_of.push(None);
        id
    }

    pub(super) fn add_edge(&mut self, a: NodeId, b: NodeId, weight: f64) {
        debug_assert!(weight >= 0.0);
        if a == b || self.adjacency[a].iter().any(|&(n, _)| n == b) {
            return;
        }
        self.adjacency[a].push((b, weight));
        self.adjacency[b].push((a, weight));
    }

    /// Adds a node for `cell` (if new) linked to its existing 4-neighbours.
    fn insert_cell(&mut self, cell: Pos) -> NodeId {
        if let Some(&id) = self.cells.get(&cell) {
            return id;
        }
        let id = self.add_node([f64::from(cell.x), f64::from(cell.y)]);
        self.cells.insert(cell, id);
        self.cell_of[id] = Some(cell);
        self.obstacles.remove(&cell);
        for n in cell.neighbours4() {
            if let Some(&other) = self.cells.get(&n) {
                self.add_edge(id, other, 1.0);
            }
        }
        id
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id < self.positions.len()
    }

    pub(super) fn check(&self, id: NodeId) -> Result<(), NavError> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(NavError::UnknownNode(id))
        }
    }

    pub fn position(&self, id: NodeId) -> Option<[f64; 2]> {
        self.positions.get(id).copied()
    }

    /// Grid cell of a node, for grid-backed graphs.
    pub fn cell(&self, id: NodeId) -> Option<Pos> {
        self.cell_of.get(id).copied().flatten()
    }

    pub fn node_at(&self, cell: Pos) -> Option<NodeId> {
        self.cells.get(&cell).copied()
    }

    pub fn neighbours(&self, id: NodeId) -> &[(NodeId, f64)] {
        self.adjacency.get(id).map_or(&[], Vec::as_slice)
    }

    /// All undirected edges as `(a, b, weight)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, adj)| adj.iter().filter(move |(b, _)| a < *b).map(move |&(b, w)| (a, b, w)))
    }

    pub fn is_blocked(&self, id: NodeId) -> bool {
        self.blocked.get(id).copied().unwrap_or(false)
    }

    pub fn set_blocked(&mut self, id: NodeId, flag: bool) -> Result<(), NavError> {
        self.check(id)?;
        self.blocked[id] = flag;
        Ok(())
    }

    pub fn blocked_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count()).filter(|&i| self.blocked[i])
    }

    pub fn is_explored(&self, id: NodeId) -> bool {
        self.explored.get(id).copied().unwrap_or(false)
    }

    pub fn mark_explored(&mut self, id: NodeId) -> Result<(), NavError> {
        self.check(id)?;
        self.explored[id] = true;
        Ok(())
    }

    pub fn explored_count(&self) -> usize {
        self.explored.iter().filter(|&&e| e).count()
    }

    pub fn is_obstacle(&self, cell: Pos) -> bool {
        self.obstacles.contains(&cell)
    }

    /// An explored node next to unexplored space: an unexplored neighbour
    /// node, or (in on-the-fly graphs) a 4-adjacent cell of unknown content.
    pub fn is_frontier(&self, id: NodeId) -> bool {
        if !self.is_explored(id) {
            return false;
        }
        if self.neighbours(id).iter().any(|&(n, _)| !self.explored[n]) {
            return true;
        }
        match (self.open_world, self.cell(id)) {
            (true, Some(cell)) => cell
                .neighbours4()
                .iter()
                .any(|c| !self.cells.contains_key(c) && !self.obstacles.contains(c)),
            _ => false,
        }
    }

    /// Grows the graph from the tile geometry in an observation.
    ///
    /// Entities on the observer's level carrying `walkable = true` become
    /// explored nodes (linked to known 4-neighbours); `walkable = false`
    /// marks a known obstacle. A node is blocked iff some live entity on its
    /// cell carries `blocking = true`. Nodes are never removed. Returns the
    /// number of nodes added.
    pub fn add_observed_geometry(&mut self, obs: &WorldModel) -> usize {
        let level = obs.current_level();
        let mut cells: HashMap<Pos, (Option<bool>, bool)> = HashMap::new();
        for e in obs.entities.values().filter(|e| e.level() == level) {
            let entry = cells.entry(e.position).or_insert((None, false));
            if let Some(w) = e.prop("walkable").and_then(|v| v.as_bool()) {
                entry.0 = Some(w || entry.0 == Some(true));
            }
            if e.alive && e.flag("blocking") {
                entry.1 = true;
            }
        }
        let before = self.node_count();
        // Sorted so that node ids do not depend on hash order.
        let mut touched: Vec<_> = cells.into_iter().collect();
        touched.sort_by_key(|(p, _)| (p.y, p.x));
        for (cell, (walkable, blocking)) in touched {
            match walkable {
                Some(true) => {
                    let id = self.insert_cell(cell);
                    self.explored[id] = true;
                    self.blocked[id] = blocking;
                }
                Some(false) => {
                    if !self.cells.contains_key(&cell) {
                        self.obstacles.insert(cell);
                    }
                }
                None => {
                    if let Some(&id) = self.cells.get(&cell) {
                        self.blocked[id] = blocking;
                    }
                }
            }
        }
        self.node_count() - before
    }
}
