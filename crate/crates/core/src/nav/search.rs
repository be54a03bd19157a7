use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::graph::{Metric, NavGraph, NodeId};
use super::NavError;

/// A path with inclusive endpoints and its total edge weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub cost: f64,
}

impl Path {
    /// Node after the start, if the path has more than one node.
    pub fn next_hop(&self) -> Option<NodeId> {
        self.nodes.get(1).copied()
    }
}

/// Search strategy for [`NavGraph::find_path_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Search {
    AStar,
    /// A* with a zero heuristic.
    Dijkstra,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub path: Option<Path>,
    /// Number of nodes taken off the open list and expanded.
    pub expansions: usize,
}

#[derive(Clone, Copy)]
struct Open {
    f: f64,
    node: NodeId,
}

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Open {}

impl Ord for Open {
    // Min-heap on f; equal f pops the lower node id first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.f.total_cmp(&self.f).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl NavGraph {
    fn heuristic(&self, a: NodeId, b: NodeId) -> f64 {
        let (pa, pb) = (self.position(a).unwrap_or_default(), self.position(b).unwrap_or_default());
        let (dx, dy) = ((pa[0] - pb[0]).abs(), (pa[1] - pb[1]).abs());
        match self.metric() {
            Metric::UnitGrid => dx + dy,
            Metric::Euclidean => dx.hypot(dy),
        }
    }

    fn best_first(
        &self,
        src: NodeId,
        is_goal: impl Fn(NodeId) -> bool,
        h: impl Fn(NodeId) -> f64,
    ) -> SearchOutcome {
        let n = self.node_count();
        let mut g = vec![f64::INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut closed = vec![false; n];
        let mut open = BinaryHeap::new();
        let mut expansions = 0;
        g[src] = 0.0;
        open.push(Open { f: h(src), node: src });
        while let Some(Open { node, .. }) = open.pop() {
            if closed[node] {
                continue;
            }
            closed[node] = true;
            expansions += 1;
            if is_goal(node) {
                let mut nodes = vec![node];
                let mut cur = node;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    nodes.push(cur);
                }
                nodes.reverse();
                return SearchOutcome { path: Some(Path { nodes, cost: g[node] }), expansions };
            }
            for &(next, w) in self.neighbours(node) {
                if closed[next] || self.is_blocked(next) {
                    continue;
                }
                let tentative = g[node] + w;
                if tentative < g[next] {
                    g[next] = tentative;
                    parent[next] = node;
                    open.push(Open { f: tentative + h(next), node: next });
                }
            }
        }
        SearchOutcome { path: None, expansions }
    }

    /// Shortest path from `src` to `dst` avoiding blocked nodes (`src` is
    /// exempt, `dst` must be unblocked). `None` when unreachable.
    pub fn find_path(&self, src: NodeId, dst: NodeId) -> Result<Option<Path>, NavError> {
        Ok(self.find_path_with(src, dst, Search::AStar)?.path)
    }

    pub fn find_path_with(&self, src: NodeId, dst: NodeId, search: Search) -> Result<SearchOutcome, NavError> {
        self.check(src)?;
        self.check(dst)?;
        if src == dst {
            return Ok(SearchOutcome { path: Some(Path { nodes: vec![src], cost: 0.0 }), expansions: 0 });
        }
        Ok(match search {
            Search::AStar => self.best_first(src, |n| n == dst, |n| self.heuristic(n, dst)),
            Search::Dijkstra => self.best_first(src, |n| n == dst, |_| 0.0),
        })
    }

    /// Shortest path from `src` to the nearest of `targets`.
    pub fn find_path_to_any(&self, src: NodeId, targets: &[NodeId]) -> Result<Option<Path>, NavError> {
        self.check(src)?;
        for &t in targets {
            self.check(t)?;
        }
        if targets.contains(&src) {
            return Ok(Some(Path { nodes: vec![src], cost: 0.0 }));
        }
        let h = |n: NodeId| targets.iter().map(|&t| self.heuristic(n, t)).fold(f64::INFINITY, f64::min);
        Ok(self.best_first(src, |n| targets.contains(&n), h).path)
    }

    /// Shortest-path costs from `src` over unblocked nodes (`src` exempt).
    pub fn distances_from(&self, src: NodeId) -> Result<Vec<Option<f64>>, NavError> {
        self.check(src)?;
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        let mut open = BinaryHeap::new();
        dist[src] = 0.0;
        open.push(Open { f: 0.0, node: src });
        while let Some(Open { node, .. }) = open.pop() {
            if done[node] {
                continue;
            }
            done[node] = true;
            for &(next, w) in self.neighbours(node) {
                if !done[next] && !self.is_blocked(next) && dist[node] + w < dist[next] {
                    dist[next] = dist[node] + w;
                    open.push(Open { f: dist[next], node: next });
                }
            }
        }
        Ok(dist.into_iter().map(|d| d.is_finite().then_some(d)).collect())
    }

    /// Reachable unblocked frontier node closest to `pos`; ties go to the
    /// smaller node id. `None` when no frontier is reachable.
    pub fn next_exploration_target(&self, pos: NodeId) -> Result<Option<NodeId>, NavError> {
        let dist = self.distances_from(pos)?;
        Ok(dist
            .iter()
            .enumerate()
            .filter_map(|(id, d)| d.map(|d| (id, d)))
            .filter(|&(id, _)| (id == pos || !self.is_blocked(id)) && self.is_frontier(id))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .map(|(id, _)| id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: &[&str]) -> NavGraph {
        let cells: Vec<Vec<bool>> = rows.iter().map(|r| r.chars().map(|c| c != '#').collect()).collect();
        NavGraph::from_grid(&cells).unwrap()
    }

    fn at(g: &NavGraph, x: i32, y: i32) -> NodeId {
        g.node_at(crate::world::Pos::new(x, y)).unwrap()
    }

    #[test]
    fn path_to_self() {
        let g = grid(&["..."]);
        let p = g.find_path(1, 1).unwrap().unwrap();
        assert_eq!(p.nodes, vec![1]);
        assert_eq!(p.cost, 0.0);
    }

    #[test]
    fn walled_off_destination_is_unreachable() {
        let g = grid(&["..#.", "..#."]);
        assert!(g.find_path(at(&g, 0, 0), at(&g, 3, 1)).unwrap().is_none());
    }

    #[test]
    fn unknown_nodes_are_errors() {
        let g = grid(&[".."]);
        assert!(matches!(g.find_path(0, 9), Err(NavError::UnknownNode(9))));
        assert!(matches!(g.next_exploration_target(5), Err(NavError::UnknownNode(5))));
    }

    #[test]
    fn blocking_the_only_corridor_and_unblocking_it() {
        let mut g = grid(&["...", "#.#", "..."]);
        let (src, dst, corridor) = (at(&g, 0, 0), at(&g, 2, 2), at(&g, 1, 1));
        let before = g.find_path(src, dst).unwrap().unwrap();
        g.set_blocked(corridor, true).unwrap();
        assert!(g.find_path(src, dst).unwrap().is_none());
        g.set_blocked(corridor, false).unwrap();
        let after = g.find_path(src, dst).unwrap().unwrap();
        assert_eq!(after.cost, before.cost);
        assert_eq!(after.cost, 4.0);
    }

    #[test]
    fn blocked_source_is_exempt_but_blocked_destination_is_not() {
        let mut g = grid(&["..."]);
        g.set_blocked(0, true).unwrap();
        assert_eq!(g.find_path(0, 2).unwrap().unwrap().cost, 2.0);
        g.set_blocked(2, true).unwrap();
        assert!(g.find_path(1, 2).unwrap().is_none());
    }

    #[test]
    fn equal_cost_ties_prefer_lower_ids() {
        let g = grid(&["..", ".."]);
        let p = g.find_path(0, 3).unwrap().unwrap();
        assert_eq!(p.nodes, vec![0, 1, 3]);
    }

    #[test]
    fn exploration_target_none_when_everything_explored() {
        let mut g = grid(&["...", "..."]);
        for id in 0..g.node_count() {
            g.mark_explored(id).unwrap();
        }
        assert_eq!(g.next_exploration_target(0).unwrap(), None);
    }

    #[test]
    fn single_frontier_is_chosen() {
        let mut g = grid(&["...."]);
        for id in 0..3 {
            g.mark_explored(id).unwrap();
        }
        assert_eq!(g.next_exploration_target(0).unwrap(), Some(2));
    }

    #[test]
    fn exploration_tie_goes_to_smaller_id() {
        let mut g = grid(&["....."]);
        for id in 1..4 {
            g.mark_explored(id).unwrap();
        }
        // Frontiers 1 and 3 are both one step from 2.
        assert_eq!(g.next_exploration_target(2).unwrap(), Some(1));
    }

    #[test]
    fn multi_target_search_reaches_nearest() {
        let g = grid(&["......"]);
        let p = g.find_path_to_any(2, &[0, 5]).unwrap().unwrap();
        assert_eq!(p.nodes, vec![2, 1, 0]);
    }
}
